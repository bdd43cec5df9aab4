#include <doctest.h>

#include <map>

#include "dclc/error.hpp"
#include "dclc/lifecycle.hpp"
#include "helpers.hpp"

using namespace dclc;

namespace {

// Two GPU generations and one 7B flagship; demand sized to a few dozen servers.
Scenario small_scenario() {
    Scenario s;
    s.start_month = Month::of(2020, 1);
    s.demand.base_rps = 2000;
    s.demand.annual_growth = 0.2;
    s.demand.horizon_months = 48;
    s.workload = {128, 16, 8};
    s.perf.tp_selection = TpSelection::max_goodput;

    HardwareSku old = testutil::gpu("old", 312e12, 2.0e12, 640e9, 6500, 200000);
    old.release_month = Month::of(2019, 1);
    HardwareSku neu = testutil::gpu("new", 989e12, 3.35e12, 640e9, 10200, 375000);
    neu.release_month = Month::of(2021, 1);
    neu.availability_delay_months = 3;
    s.hardware_seeds = {old, neu};

    ModelSpec m = testutil::dense("m7b", 7e9, 32, 4096, 524288);
    m.release_month = Month::of(2019, 6);
    s.model_seeds = {m};
    s.initial_fleet = {{"old", -1}};
    s.design.facility_capacity_watts = 50e6;
    return s;
}

long long servers_of(const FleetState& f, const std::string& sku) {
    long long n = 0;
    for (const auto& c : f.cohorts)
        if (c.sku_id == sku) n += c.servers;
    return n;
}

void check_invariants(const Scenario& s, const RefreshPolicy& refresh, const SimulationResult& r) {
    // Timeline is monthly-contiguous from the start.
    for (std::size_t i = 0; i < r.fleet_timeline.size(); ++i)
        CHECK(r.fleet_timeline[i].month == s.start_month + static_cast<int>(i));

    // Lifetime TCO re-sums from the annual series; annual breakdowns add up.
    Cents sum = 0;
    for (const auto& y : r.annual_tco) {
        CHECK(y.tco.total == y.tco.sum_components());
        sum += y.tco.total;
    }
    CHECK(sum == r.lifetime_tco);

    // Server-count deltas match purchases minus decommissions.
    std::map<Month, long long> delta;
    for (const auto& e : r.event_log) {
        if (e.kind == EventKind::purchase) delta[e.month] += e.count;
        if (e.kind == EventKind::decommission) delta[e.month] -= e.count;
    }
    long long prev = 0;
    for (const auto& f : r.fleet_timeline) {
        CHECK(f.total_servers() - prev == delta[f.month]);
        prev = f.total_servers();

        for (const auto& c : f.cohorts) {
            CHECK(f.month - c.purchase_month < c.lifetime_months);  // no zombies
            CHECK(c.lifetime_months == (refresh.lifetime_for(c.sku_id) ? refresh.lifetime_for(c.sku_id)
                                                                       : refresh.default_lifetime_months));
        }
        for (const auto& [job, shares] : f.assignments) {
            double total = 0;
            for (const auto& a : shares) {
                CHECK(a.share > 0);
                CHECK(a.cohort < f.cohorts.size());
                total += a.share;
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
        }
        for (double u : f.utilization) {
            CHECK(u >= 0);
            CHECK(u <= 1.0 + 1e-12);
        }
    }
}

}  // namespace

TEST_CASE("demand trajectory") {
    DemandTrajectory d;
    CHECK(demand_at(d, 60) == doctest::Approx(201136).epsilon(1e-5));
    d.diurnal_shape.fill(1.0);
    CHECK(demand_at(d, 0) == 100000);
    CHECK(peak_demand_at(d, 0) == 100000);
    d.annual_growth = 0;
    for (int m = 0; m < d.horizon_months; ++m) CHECK(demand_at(d, m) == 100000);
    CHECK_THROWS_AS(demand_at(d, d.horizon_months), ValidationError);
    CHECK_THROWS_AS(demand_at(d, -1), ValidationError);

    DemandTrajectory shaped;
    double mean = 0;
    for (double v : shaped.diurnal_shape) mean += v / 24;
    CHECK(mean == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(shaped.peak_factor() > 1.0);
    for (double& v : shaped.diurnal_shape) v *= 1.2;
    CHECK_THROWS_AS(validate(shaped), ValidationError);
}

TEST_CASE("effective requirements") {
    const ModelSpec m = testutil::dense("m", 7e9);
    OperationPolicy off;
    const auto id = effective_requirements(m, off, 0);
    CHECK(id.scale == RequirementScale{});
    CHECK(id.new_model_share == 1.0);
    CHECK(id.routed_fraction == 0.0);

    OperationPolicy q;
    q.quantization = true;
    q.quant_compute_factor = 0.5;
    const RequirementProfile base = model_requirements(m, {});
    const RequirementProfile scaled = scale_requirements(base, effective_requirements(m, q, 0).scale);
    CHECK(scaled.prefill_flops == doctest::Approx(base.prefill_flops / 2));

    OperationPolicy mig;
    mig.migration_smoothing = true;
    mig.migration_window_months = 6;
    CHECK(effective_requirements(m, mig, 3).new_model_share == doctest::Approx(0.5));
    CHECK(effective_requirements(m, mig, 0).new_model_share == 0.0);
    CHECK(effective_requirements(m, mig, 9).new_model_share == 1.0);

    OperationPolicy both = q;
    both.kv_cache_mgmt = true;
    const auto s = effective_requirements(m, both, 0).scale;
    CHECK(s.kv_bytes == doctest::Approx(q.quant_memory_factor * both.kv_byte_factor));

    OperationPolicy bad;
    bad.kv_byte_factor = 1.5;
    CHECK_THROWS_AS(validate(bad), ValidationError);
    bad = {};
    bad.headroom_factor = 0.9;
    CHECK_THROWS_AS(validate(bad), ValidationError);
}

TEST_CASE("refresh policy validation and lookup") {
    RefreshPolicy p;
    CHECK(p.lifetime_for("x") == 60);
    p.lifetime_months_by_generation["x"] = 0;
    CHECK(p.skips("x"));
    CHECK_NOTHROW(validate(p));
    p.lifetime_months_by_generation["y"] = 6;
    CHECK_THROWS_AS(validate(p), ValidationError);
    RefreshPolicy q;
    q.default_lifetime_months = 130;
    CHECK_THROWS_AS(validate(q), ValidationError);
}

TEST_CASE("assign_fleet greedy fill") {
    AssignmentInput in;
    in.jobs = {Job{0, Job::Phase::full, 50}};
    in.cohort_servers = {10};
    in.goodput = {{10}};
    in.preference = {{0}};
    auto out = assign_fleet(in);
    CHECK(out.feasible());
    CHECK(out.servers_used[0][0] == doctest::Approx(5));

    in.cohort_servers = {3, 10};
    in.goodput = {{10, 5}};
    in.preference = {{0, 1}};
    out = assign_fleet(in);
    CHECK(out.feasible());
    CHECK(out.servers_used[0][0] == doctest::Approx(3));
    CHECK(out.servers_used[0][1] == doctest::Approx(4));

    in.jobs[0].demand_rps = 200;
    out = assign_fleet(in);
    CHECK_FALSE(out.feasible());
    CHECK(out.unmet_rps[0] == doctest::Approx(200 - 30 - 50));
}

TEST_CASE("simulation: single cohort serves everything") {
    Scenario s = small_scenario();
    s.demand.annual_growth = 0;
    s.demand.horizon_months = 12;
    const auto r = simulate(s, {}, {});
    REQUIRE(r.status == SimulationStatus::completed);
    for (const auto& f : r.fleet_timeline) {
        REQUIRE(f.cohorts.size() == 1);
        REQUIRE(f.assignments.at("m7b").size() == 1);
        CHECK(f.assignments.at("m7b")[0].share == doctest::Approx(1.0));
    }
}

TEST_CASE("simulation: fixed point without growth, releases or retirements") {
    Scenario s = small_scenario();
    s.hardware_seeds.pop_back();
    s.demand.annual_growth = 0;
    s.demand.horizon_months = 60;
    RefreshPolicy keep;
    keep.default_lifetime_months = 120;
    const auto r = simulate(s, keep, {});
    REQUIRE(r.status == SimulationStatus::completed);
    for (const auto& f : r.fleet_timeline) CHECK(f.total_servers() == r.fleet_timeline.front().total_servers());
}

TEST_CASE("simulation: invariants and determinism") {
    Scenario s = small_scenario();
    for (int life : {12, 36, 60}) {
        RefreshPolicy p;
        p.default_lifetime_months = life;
        const auto r = simulate(s, p, {});
        REQUIRE(r.status == SimulationStatus::completed);
        check_invariants(s, p, r);
        CHECK(simulate(s, p, {}) == r);
    }
    OperationPolicy all = OperationPolicy::all_enabled();
    const auto r = simulate(s, {}, all);
    REQUIRE(r.status == SimulationStatus::completed);
    check_invariants(s, {}, r);
}

TEST_CASE("simulation: skipped SKU is never purchased") {
    Scenario s = small_scenario();
    RefreshPolicy p;
    p.lifetime_months_by_generation["new"] = 0;
    const auto r = simulate(s, p, {});
    for (const auto& e : r.event_log)
        if (e.kind == EventKind::purchase) CHECK(e.subject != "new");
    bool bought_new = false;
    for (const auto& e : simulate(s, {}, {}).event_log) bought_new |= e.kind == EventKind::purchase && e.subject == "new";
    CHECK(bought_new);
}

TEST_CASE("simulation: model release pinned to new hardware triggers a same-month purchase spike") {
    Scenario s = small_scenario();
    s.demand.annual_growth = 0;
    ModelSpec next = testutil::dense("m13b", 13e9, 40, 5120, 819200);
    next.release_month = Month::of(2022, 1);
    s.model_seeds.push_back(next);
    const auto r = simulate(s, {}, {});
    REQUIRE(r.status == SimulationStatus::completed);
    long long spike = 0, before = 0;
    for (const auto& e : r.event_log) {
        if (e.kind != EventKind::purchase) continue;
        if (e.month == Month::of(2022, 1)) spike += e.count;
        else if (e.month > s.start_month && e.month < Month::of(2022, 1)) before += e.count;
    }
    CHECK(spike > 0);
    CHECK(before == 0);

    // Migration smoothing spreads the same refresh over the window.
    OperationPolicy mig;
    mig.migration_smoothing = true;
    mig.migration_window_months = 6;
    const auto smooth = simulate(s, {}, mig);
    long long smooth_spike = 0;
    for (const auto& e : smooth.event_log)
        if (e.kind == EventKind::purchase && e.month == Month::of(2022, 1)) smooth_spike += e.count;
    CHECK(smooth_spike < spike);
}

TEST_CASE("simulation: hetero scheduling moves a small model to the better goodput-per-dollar cohort") {
    Scenario s = small_scenario();
    s.demand.annual_growth = 0;
    s.demand.horizon_months = 12;
    s.start_month = Month::of(2021, 6);
    // Old generation is cheap enough to win on goodput per dollar.
    s.hardware_seeds[0].server_cost_usd = 60000;
    s.model_seeds[0] = testutil::dense("m1b", 1e9, 16, 2048, 65536);
    s.model_seeds[0].release_month = Month::of(2021, 5);
    s.initial_fleet = {{"old", 100}, {"new", 100}};
    const Month release = s.model_seeds[0].release_month;
    (void)release;

    OperationPolicy hetero;
    hetero.hetero_scheduling = true;
    const auto on = simulate(s, {}, hetero);
    const auto off = simulate(s, {}, {});
    REQUIRE(on.status == SimulationStatus::completed);
    REQUIRE(off.status == SimulationStatus::completed);
    const auto& f_on = on.fleet_timeline.front();
    const auto& f_off = off.fleet_timeline.front();
    REQUIRE(f_on.assignments.at("m1b").size() >= 1);
    CHECK(f_on.cohorts[f_on.assignments.at("m1b")[0].cohort].sku_id == "old");
    CHECK(f_off.cohorts[f_off.assignments.at("m1b")[0].cohort].sku_id == "new");
}

TEST_CASE("simulation: disaggregation puts decode on the old cohort when prefill cannot run there") {
    Scenario s = small_scenario();
    s.demand.annual_growth = 0;
    s.demand.horizon_months = 12;
    s.start_month = Month::of(2021, 6);
    s.workload = {2048, 64, 1};
    // Old SKU: far too slow for a long prompt, plenty of bandwidth for decode.
    s.hardware_seeds[0].peak_flops = 10e12;
    s.hardware_seeds[0].mem_bandwidth = 3e12;
    s.initial_fleet = {{"old", 200}, {"new", 50}};
    OperationPolicy dis;
    dis.disaggregation = true;
    const auto r = simulate(s, {}, dis);
    REQUIRE(r.status == SimulationStatus::completed);
    const auto& f = r.fleet_timeline.front();
    for (const auto& a : f.assignments.at("m7b/prefill")) CHECK(f.cohorts[a.cohort].sku_id == "new");
    bool decode_on_old = false;
    for (const auto& a : f.assignments.at("m7b/decode")) decode_on_old |= f.cohorts[a.cohort].sku_id == "old";
    CHECK(decode_on_old);
}

TEST_CASE("simulation: capacity exhaustion halts instead of throwing") {
    Scenario s = small_scenario();
    const auto free = simulate(s, {}, {});
    REQUIRE(free.status == SimulationStatus::completed);
    auto watts_at = [&](const FleetState& f) {
        double w = 0;
        for (const auto& c : f.cohorts)
            w += provisioned_watts_for(s.design, c.servers, find_sku(s.hardware_seeds, c.sku_id)->tdp_server_watts);
        return w;
    };
    // Room for the opening fleet plus a little growth, not the whole horizon.
    s.design.facility_capacity_watts = watts_at(free.fleet_timeline.front()) * 1.1;
    REQUIRE(watts_at(free.fleet_timeline.back()) > s.design.facility_capacity_watts);
    const auto r = simulate(s, {}, {});
    CHECK(r.status == SimulationStatus::capacity_exhausted);
    REQUIRE(r.halted_at.has_value());
    REQUIRE_FALSE(r.event_log.empty());
    CHECK(r.event_log.back().kind == EventKind::capacity_exhausted);
    CHECK(r.event_log.back().subject == "power-capacity");
    for (const auto& f : r.fleet_timeline) CHECK(watts_at(f) <= s.design.facility_capacity_watts);
}

TEST_CASE("simulator stepping matches simulate") {
    const Scenario s = small_scenario();
    Simulator sim(s, {}, {});
    int steps = 0;
    while (sim.step()) {
        CHECK(sim.state().month == s.start_month + steps);
        ++steps;
    }
    CHECK(steps == s.demand.horizon_months);
    CHECK(sim.finish(true) == simulate(s, {}, {}));
}

TEST_CASE("baseline: single operation flags never raise lifetime TCO") {
    const auto doc = testutil::baseline();
    const auto base = simulate(doc.scenario, doc.policy.refresh, {}, {false});
    REQUIRE(base.status == SimulationStatus::completed);
    for (int i = 0; i < OperationPolicy::kFlagCount; ++i) {
        OperationPolicy op;
        op.set_flag(i, true);
        const auto r = simulate(doc.scenario, doc.policy.refresh, op, {false});
        CAPTURE(OperationPolicy::flag_names[i]);
        REQUIRE(r.status == SimulationStatus::completed);
        CHECK(r.lifetime_tco <= base.lifetime_tco);
    }
}

TEST_CASE("baseline scenario is SLO-feasible every month") {
    const auto doc = testutil::baseline();
    const auto r = simulate(doc.scenario, doc.policy.refresh, {});
    REQUIRE(r.status == SimulationStatus::completed);
    check_invariants(doc.scenario, doc.policy.refresh, r);
    CHECK(r.fleet_timeline.size() == 180);
}
