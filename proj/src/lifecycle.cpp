#include "dclc/lifecycle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "dclc/error.hpp"

namespace dclc {

// ---- demand -------------------------------------------------------------

std::array<double, 24> DemandTrajectory::default_diurnal_shape() {
    std::array<double, 24> s{};
    for (int h = 0; h < 24; ++h) s[h] = 1.0 + 0.3 * std::sin(2.0 * std::numbers::pi * (h - 8) / 24.0);
    // Remove the (tiny) rounding bias so the mean is 1 to machine precision.
    const double mean = std::accumulate(s.begin(), s.end(), 0.0) / 24.0;
    for (double& v : s) v /= mean;
    return s;
}

double DemandTrajectory::peak_factor() const { return *std::max_element(diurnal_shape.begin(), diurnal_shape.end()); }

void validate(const DemandTrajectory& d) {
    if (!(d.base_rps > 0)) throw ValidationError("demand.base_rps", "must be > 0");
    if (!(d.annual_growth > -1)) throw ValidationError("demand.annual_growth", "must be > -1");
    for (double v : d.diurnal_shape)
        if (!(v >= 0)) throw ValidationError("demand.diurnal_shape", "fractions must be >= 0");
    const double mean = std::accumulate(d.diurnal_shape.begin(), d.diurnal_shape.end(), 0.0) / 24.0;
    if (std::abs(mean - 1.0) > 1e-9)
        throw ValidationError("demand.diurnal_shape", "fractions must average 1 (got " + std::to_string(mean) + ")");
    if (d.horizon_months < 12) throw ValidationError("horizon_months", "must be >= 12");
}

double demand_at(const DemandTrajectory& d, int month) {
    if (month < 0 || month >= d.horizon_months)
        throw ValidationError("month", "index " + std::to_string(month) + " outside the horizon");
    return d.base_rps * std::pow(1.0 + d.annual_growth, month / 12.0);
}

double peak_demand_at(const DemandTrajectory& d, int month) { return demand_at(d, month) * d.peak_factor(); }

// ---- policies -----------------------------------------------------------

int RefreshPolicy::lifetime_for(const std::string& id) const {
    auto it = lifetime_months_by_generation.find(id);
    return it == lifetime_months_by_generation.end() ? default_lifetime_months : it->second;
}

void validate(const RefreshPolicy& p) {
    auto ok = [](int v) { return v == 0 || (v >= 12 && v <= 120); };
    if (!(p.default_lifetime_months >= 12 && p.default_lifetime_months <= 120))
        throw ValidationError("refresh.default_lifetime_months", "must be within 12..120");
    for (const auto& [id, v] : p.lifetime_months_by_generation)
        if (!ok(v)) throw ValidationError("refresh.lifetime_months_by_generation." + id, "must be 0 or 12..120");
}

bool OperationPolicy::flag(int i) const {
    switch (i) {
        case 0: return migration_smoothing;
        case 1: return quantization;
        case 2: return kv_cache_mgmt;
        case 3: return disaggregation;
        case 4: return alt_architectures;
        case 5: return model_routing;
        case 6: return hetero_scheduling;
        case 7: return infra_scheduling;
    }
    throw ValidationError("operation", "flag index out of range");
}

void OperationPolicy::set_flag(int i, bool on) {
    switch (i) {
        case 0: migration_smoothing = on; return;
        case 1: quantization = on; return;
        case 2: kv_cache_mgmt = on; return;
        case 3: disaggregation = on; return;
        case 4: alt_architectures = on; return;
        case 5: model_routing = on; return;
        case 6: hetero_scheduling = on; return;
        case 7: infra_scheduling = on; return;
    }
    throw ValidationError("operation", "flag index out of range");
}

int OperationPolicy::enabled_count() const {
    int n = 0;
    for (int i = 0; i < kFlagCount; ++i) n += flag(i) ? 1 : 0;
    return n;
}

OperationPolicy OperationPolicy::all_enabled() {
    OperationPolicy p;
    for (int i = 0; i < kFlagCount; ++i) p.set_flag(i, true);
    return p;
}

void validate(const OperationPolicy& p) {
    auto unit = [](double v, const char* name) {
        if (!(v > 0 && v <= 1)) throw ValidationError(std::string("operation.") + name, "must be within (0, 1]");
    };
    unit(p.quant_compute_factor, "quant_compute_factor");
    unit(p.quant_memory_factor, "quant_memory_factor");
    unit(p.kv_byte_factor, "kv_byte_factor");
    unit(p.alt_active_fraction, "alt_active_fraction");
    unit(p.small_model_fraction, "small_model_fraction");
    if (p.migration_window_months < 0) throw ValidationError("operation.migration_window_months", "must be >= 0");
    if (!(p.headroom_factor >= 1)) throw ValidationError("operation.headroom_factor", "must be >= 1");
}

RequirementModifier effective_requirements(const ModelSpec&, const OperationPolicy& p, int months_since_release) {
    RequirementModifier m;
    if (p.quantization) {
        m.scale.compute *= p.quant_compute_factor;
        m.scale.weight_bytes *= p.quant_memory_factor;
        m.scale.kv_bytes *= p.quant_memory_factor;
    }
    if (p.kv_cache_mgmt) {
        m.scale.kv_bytes *= p.kv_byte_factor;
        m.scale.prefill_compute *= p.kv_byte_factor;
    }
    if (p.alt_architectures) m.scale.active *= p.alt_active_fraction;
    if (p.migration_smoothing && p.migration_window_months > 0) {
        m.new_model_share =
            std::clamp(static_cast<double>(months_since_release) / p.migration_window_months, 0.0, 1.0);
    }
    if (p.model_routing) m.routed_fraction = p.small_model_fraction;
    return m;
}

// ---- scenario -----------------------------------------------------------

bool Scenario::operator==(const Scenario& o) const {
    return schema_version == o.schema_version && start_month == o.start_month && demand == o.demand &&
           workload == o.workload && slo == o.slo && perf == o.perf && model_seeds == o.model_seeds &&
           model_regime == o.model_regime && hardware_seeds == o.hardware_seeds &&
           hardware_regime == o.hardware_regime && synthetic_delay_months == o.synthetic_delay_months &&
           demand_lineage == o.demand_lineage && small_lineage == o.small_lineage &&
           initial_fleet == o.initial_fleet && design == o.design && design_options == o.design_options &&
           prices == o.prices && schedule == o.schedule;
}

void validate(const Scenario& s) {
    if (s.schema_version != 1) throw ValidationError("schema_version", "unsupported version");
    validate(s.demand);
    validate(s.workload);
    validate(s.slo);
    validate(s.design);
    validate(s.prices);
    validate(s.schedule);
    if (!(s.perf.gpu_efficiency > 0 && s.perf.gpu_efficiency <= 1))
        throw ValidationError("perf.gpu_efficiency", "must be within (0, 1]");
    if (!(s.perf.cpu_efficiency > 0 && s.perf.cpu_efficiency <= 1))
        throw ValidationError("perf.cpu_efficiency", "must be within (0, 1]");
    if (!(s.perf.tp_penalty >= 0 && s.perf.tp_penalty < 0.3))
        throw ValidationError("perf.tp_penalty", "must be within [0, 0.3)");
    if (!(s.perf.usable_memory_fraction > 0 && s.perf.usable_memory_fraction <= 1))
        throw ValidationError("perf.usable_memory_fraction", "must be within (0, 1]");
    if (s.model_seeds.empty()) throw ValidationError("model_roadmap", "no models");
    if (s.hardware_seeds.empty()) throw ValidationError("hardware_roadmap", "no SKUs");
    for (const auto& m : s.model_seeds) validate(m);
    for (const auto& h : s.hardware_seeds) validate(h);
    if (s.model_regime) validate(*s.model_regime);
    if (s.hardware_regime) validate(*s.hardware_regime);
    if (s.synthetic_delay_months < 0) throw ValidationError("hardware_roadmap.synthetic_delay_months", "must be >= 0");

    bool has_demand_model = false;
    for (const auto& m : s.model_seeds)
        if (m.lineage == s.demand_lineage && m.release_month <= s.start_month) has_demand_model = true;
    if (!has_demand_model)
        throw ValidationError("demand_lineage",
                              "no '" + s.demand_lineage + "' model is released by the start month");
    for (std::size_t i = 0; i < s.initial_fleet.size(); ++i) {
        const auto& c = s.initial_fleet[i];
        const std::string where = "initial_fleet[" + std::to_string(i) + "]";
        if (!find_sku(s.hardware_seeds, c.sku)) throw ValidationError(where + ".sku", "unknown SKU '" + c.sku + "'");
        if (c.count < -1) throw ValidationError(where + ".count", "must be >= 0 or \"auto\"");
    }
}

ResolvedCatalog resolve_catalog(const Scenario& s) {
    ResolvedCatalog c;
    const Month end = s.end_month();
    auto hw_horizon = end;
    for (const auto& h : s.hardware_seeds) hw_horizon = std::max(hw_horizon, h.release_month);
    auto model_horizon = end;
    for (const auto& m : s.model_seeds) model_horizon = std::max(model_horizon, m.release_month);
    c.skus = s.hardware_regime
                 ? project_hardware_roadmap(s.hardware_seeds, hw_horizon, *s.hardware_regime, s.synthetic_delay_months)
                 : s.hardware_seeds;
    c.models = s.model_regime ? project_model_roadmap(s.model_seeds, model_horizon, *s.model_regime) : s.model_seeds;
    return c;
}

long long FleetState::total_servers() const {
    long long n = 0;
    for (const auto& c : cohorts) n += c.servers;
    return n;
}

// ---- assignment ---------------------------------------------------------

bool AssignmentOutput::feasible() const {
    return std::all_of(unmet_rps.begin(), unmet_rps.end(), [](double u) { return u <= 0; });
}

AssignmentOutput assign_fleet(const AssignmentInput& in) {
    const std::size_t nj = in.jobs.size();
    const std::size_t nc = in.cohort_servers.size();
    AssignmentOutput out;
    out.servers_used.assign(nj, std::vector<double>(nc, 0.0));
    out.unmet_rps.assign(nj, 0.0);
    std::vector<double> free(nc);
    for (std::size_t c = 0; c < nc; ++c) free[c] = static_cast<double>(in.cohort_servers[c]);

    for (std::size_t j = 0; j < nj; ++j) {
        double remaining = in.jobs[j].demand_rps;
        for (std::size_t c : in.preference[j]) {
            if (remaining <= 0) break;
            const double gp = in.goodput[j][c];
            if (gp <= 0 || free[c] <= 0) continue;
            const double need = remaining / gp;
            const double take = std::min(need, free[c]);
            out.servers_used[j][c] += take;
            free[c] -= take;
            remaining = take >= need ? 0.0 : remaining - take * gp;
        }
        // Relative slack absorbs floating-point residue from the division above.
        out.unmet_rps[j] = remaining > 1e-9 * std::max(1.0, in.jobs[j].demand_rps) ? remaining : 0.0;
    }
    return out;
}

// ---- simulator ----------------------------------------------------------

namespace {

constexpr double kUnknown = -2.0;
constexpr int kPhases = 3;

struct LiveCohort {
    std::size_t sku;
    int purchased_at;  // month index
    long long servers;
    int lifetime;
};

struct Tranche {
    double watts;
    double slots;
    int built_at;
};

struct YearAccumulator {
    int year = 0;
    int months = 0;
    std::array<double, 10> usd{};
    double peak_usd_max = 0;
};

}  // namespace

struct Simulator::Impl {
    Scenario sc;
    RefreshPolicy refresh;
    OperationPolicy op;
    ResolvedCatalog cat;

    std::vector<int> rank;                   // per SKU, generation order by availability
    std::vector<std::size_t> demand_models;  // indices, release order
    std::vector<std::size_t> small_models;
    std::vector<char> stocked;   // per SKU: part of the initial fleet, so purchasable from the start
    std::vector<int> threshold;  // per model: min SKU rank eligible without hetero scheduling
    std::vector<int> hetero_threshold;  // one GPU generation below `threshold`
    std::vector<RequirementProfile> base_req;
    std::vector<RequirementScale> scale;
    std::vector<PerfConfig> cfg;  // per SKU
    std::vector<double> goodput_cache;

    int t = 0;
    bool halted = false;
    std::vector<LiveCohort> cohorts;
    std::vector<Tranche> tranches;
    double provisioned_watts = 0;
    double provisioned_slots = 0;

    FleetState state;
    std::vector<FleetState> timeline;
    std::vector<Event> events;
    std::vector<YearAccumulator> years;
    bool keep_timeline = true;

    Month month_at(int i) const { return sc.start_month + i; }

    double goodput(std::size_t model, std::size_t sku, Job::Phase phase) {
        const std::size_t key = (model * cat.skus.size() + sku) * kPhases + static_cast<std::size_t>(phase);
        double& slot = goodput_cache[key];
        if (slot != kUnknown) return slot;
        RequirementProfile r = scale_requirements(base_req[model], scale[model]);
        if (phase == Job::Phase::prefill) {
            r.decode_tokens = 0;
            r.decode_flops_per_token = 0;
            r.decode_bytes_per_token = 0;
        } else if (phase == Job::Phase::decode) {
            r.prefill_flops = 0;
            r.prefill_bytes = 0;
        }
        try {
            slot = max_goodput(r, cat.skus[sku], sc.slo, cfg[sku]).goodput_rps;
        } catch (const ModelUnservable&) {
            slot = 0.0;
        }
        return slot;
    }

    bool purchasable(std::size_t sku, Month m) const {
        const HardwareSku& h = cat.skus[sku];
        return h.kind == SkuKind::gpu_server && (h.available_month() <= m || stocked[sku]) && !refresh.skips(h.id);
    }

    // Newest released model of the demand lineage at month index `i`.
    std::size_t flagship_at(int i) const {
        const Month m = month_at(i);
        std::size_t cur = demand_models.front();
        for (std::size_t idx : demand_models) {
            if (cat.models[idx].release_month > m) break;
            cur = idx;
        }
        return cur;
    }

    // Hetero scheduling lets older cohorts take smaller or superseded models;
    // the flagship stays on its generation.
    bool eligible(const Job& job, std::size_t sku) const {
        if (job.phase == Job::Phase::decode) return true;
        if (op.hetero_scheduling && job.model != flagship_at(t)) return true;
        return rank[sku] >= (op.hetero_scheduling ? hetero_threshold[job.model] : threshold[job.model]);
    }

    void init() {
        validate(sc);
        validate(refresh);
        validate(op);
        cat = resolve_catalog(sc);
        const std::size_t ns = cat.skus.size();
        const std::size_t nm = cat.models.size();

        std::vector<std::size_t> order(ns);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const auto& x = cat.skus[a];
            const auto& y = cat.skus[b];
            if (x.available_month() != y.available_month()) return x.available_month() < y.available_month();
            return x.release_month < y.release_month;
        });
        stocked.assign(ns, 0);
        for (const auto& ic : sc.initial_fleet)
            for (std::size_t k = 0; k < ns; ++k)
                if (cat.skus[k].id == ic.sku) stocked[k] = 1;
        rank.assign(ns, 0);
        for (std::size_t i = 0; i < ns; ++i) rank[order[i]] = static_cast<int>(i);

        for (std::size_t i = 0; i < nm; ++i) {
            if (cat.models[i].lineage == sc.demand_lineage) demand_models.push_back(i);
            if (cat.models[i].lineage == sc.small_lineage) small_models.push_back(i);
        }
        auto by_release = [&](std::size_t a, std::size_t b) {
            return cat.models[a].release_month < cat.models[b].release_month;
        };
        std::stable_sort(demand_models.begin(), demand_models.end(), by_release);
        std::stable_sort(small_models.begin(), small_models.end(), by_release);

        threshold.assign(nm, -1);
        for (std::size_t i = 0; i < nm; ++i) {
            const Month at = std::max(cat.models[i].release_month, sc.start_month);
            for (std::size_t k = 0; k < ns; ++k)
                if (purchasable(k, at)) threshold[i] = std::max(threshold[i], rank[k]);
        }
        hetero_threshold = threshold;
        for (std::size_t i = 0; i < nm; ++i) {
            int prev = -1;
            for (std::size_t k = 0; k < ns; ++k)
                if (cat.skus[k].kind == SkuKind::gpu_server && rank[k] < threshold[i]) prev = std::max(prev, rank[k]);
            if (prev >= 0) hetero_threshold[i] = prev;
        }

        base_req.reserve(nm);
        scale.reserve(nm);
        for (const auto& m : cat.models) {
            base_req.push_back(model_requirements(m, sc.workload));
            scale.push_back(effective_requirements(m, op, 0).scale);
        }
        cfg.reserve(ns);
        for (const auto& h : cat.skus) {
            PerfConfig c = sc.perf;
            c.derate *= design_derate(sc.design, h);
            cfg.push_back(c);
        }
        goodput_cache.assign(nm * ns * kPhases, kUnknown);

        // Initial fleet, sized against month 0 when requested.
        const std::vector<Job> jobs = jobs_at(0);
        for (const auto& ic : sc.initial_fleet) {
            std::size_t sku = 0;
            while (cat.skus[sku].id != ic.sku) ++sku;
            long long n = ic.count;
            if (n < 0) {
                double need = 0;
                for (const Job& j : jobs) {
                    const double gp = goodput(j.model, sku, j.phase);
                    if (gp <= 0) throw ModelUnservable("initial fleet SKU " + ic.sku + " cannot serve " +
                                                       cat.models[j.model].id);
                    need += j.demand_rps / gp;
                }
                n = static_cast<long long>(std::ceil(need - 1e-9));
            }
            if (n == 0) continue;
            int life = refresh.lifetime_for(ic.sku);
            if (life == 0) life = refresh.default_lifetime_months;
            cohorts.push_back(LiveCohort{sku, 0, n, life});
            events.push_back(Event{sc.start_month, EventKind::purchase, ic.sku, n});
        }
        update_facility(0);
    }

    // Demand split into jobs for month index `i`, after routing and migration.
    std::vector<Job> jobs_at(int i) const {
        const Month m = month_at(i);
        double rps = peak_demand_at(sc.demand, i);
        if (op.infra_scheduling) rps /= op.headroom_factor;

        std::optional<std::size_t> current, previous, small;
        for (std::size_t idx : demand_models) {
            if (cat.models[idx].release_month > m) break;
            previous = current;
            current = idx;
        }
        for (std::size_t idx : small_models)
            if (cat.models[idx].release_month <= m) small = idx;

        const ModelSpec& cur = cat.models[*current];
        const RequirementModifier mod = effective_requirements(cur, op, m - cur.release_month);
        double routed = 0;
        if (small && mod.routed_fraction > 0 && cat.models[*small].total_params < cur.total_params)
            routed = mod.routed_fraction;
        const double share_new = previous ? mod.new_model_share : 1.0;

        std::vector<std::pair<std::size_t, double>> parts;
        parts.emplace_back(*current, rps * (1 - routed) * share_new);
        if (previous) parts.emplace_back(*previous, rps * (1 - routed) * (1 - share_new));
        if (routed > 0) parts.emplace_back(*small, rps * routed);

        std::vector<Job> jobs;
        for (const auto& [model, demand] : parts) {
            if (demand <= 0) continue;
            if (op.disaggregation) {
                jobs.push_back(Job{model, Job::Phase::prefill, demand});
                jobs.push_back(Job{model, Job::Phase::decode, demand});
            } else {
                jobs.push_back(Job{model, Job::Phase::full, demand});
            }
        }
        const std::size_t flag = flagship_at(i);
        auto pin = [&](std::size_t model) { return op.hetero_scheduling && model != flag ? -1 : threshold[model]; };
        // Most constrained first: newest pinning threshold, then bigger models.
        std::stable_sort(jobs.begin(), jobs.end(), [&](const Job& a, const Job& b) {
            const bool da = a.phase == Job::Phase::decode, db = b.phase == Job::Phase::decode;
            if (da != db) return db;
            if (pin(a.model) != pin(b.model)) return pin(a.model) > pin(b.model);
            return cat.models[a.model].total_params > cat.models[b.model].total_params;
        });
        return jobs;
    }

    AssignmentInput build_assignment(const std::vector<Job>& jobs) {
        AssignmentInput in;
        in.jobs = jobs;
        const std::size_t nc = cohorts.size();
        in.cohort_servers.resize(nc);
        for (std::size_t c = 0; c < nc; ++c) in.cohort_servers[c] = cohorts[c].servers;
        in.goodput.assign(jobs.size(), std::vector<double>(nc, 0.0));
        in.preference.resize(jobs.size());
        for (std::size_t j = 0; j < jobs.size(); ++j) {
            for (std::size_t c = 0; c < nc; ++c) {
                const std::size_t sku = cohorts[c].sku;
                if (eligible(jobs[j], sku)) in.goodput[j][c] = goodput(jobs[j].model, sku, jobs[j].phase);
            }
            auto& pref = in.preference[j];
            pref.resize(nc);
            std::iota(pref.begin(), pref.end(), 0);
            const auto& gp = in.goodput[j];
            if (op.hetero_scheduling) {
                std::stable_sort(pref.begin(), pref.end(), [&](std::size_t a, std::size_t b) {
                    const double va = gp[a] / cat.skus[cohorts[a].sku].server_cost_usd;
                    const double vb = gp[b] / cat.skus[cohorts[b].sku].server_cost_usd;
                    return va > vb;
                });
            } else if (jobs[j].phase == Job::Phase::decode) {
                // Decode soaks up the oldest hardware first, leaving new servers for prefill.
                std::stable_sort(pref.begin(), pref.end(), [&](std::size_t a, std::size_t b) {
                    return rank[cohorts[a].sku] < rank[cohorts[b].sku];
                });
            } else {
                std::stable_sort(pref.begin(), pref.end(), [&](std::size_t a, std::size_t b) {
                    const int ra = rank[cohorts[a].sku], rb = rank[cohorts[b].sku];
                    if (ra != rb) return ra > rb;
                    return cohorts[a].purchased_at > cohorts[b].purchased_at;
                });
            }
        }
        return in;
    }

    double required_watts(const std::vector<LiveCohort>& cs) const {
        std::vector<long long> per_sku(cat.skus.size(), 0);
        for (const auto& c : cs) per_sku[c.sku] += c.servers;
        double w = 0;
        for (std::size_t k = 0; k < per_sku.size(); ++k)
            if (per_sku[k] > 0) w += provisioned_watts_for(sc.design, per_sku[k], cat.skus[k].tdp_server_watts);
        return w;
    }

    void update_facility(int i) {
        const double watts = required_watts(cohorts);
        double slots = 0;
        for (const auto& c : cohorts) slots += static_cast<double>(c.servers);
        const double dw = std::max(0.0, watts - provisioned_watts);
        const double ds = std::max(0.0, slots - provisioned_slots);
        if (dw > 0 || ds > 0) {
            tranches.push_back(Tranche{dw, ds, i});
            provisioned_watts += dw;
            provisioned_slots += ds;
        }
    }

    // Picks the SKU to buy for the unmet jobs and how many servers; nullopt
    // when no available SKU can serve them.
    std::optional<std::pair<std::size_t, long long>> choose_purchase(const std::vector<Job>& jobs,
                                                                     const std::vector<double>& unmet) {
        const Month m = month_at(t);
        std::optional<std::pair<std::size_t, long long>> best;
        double best_cost = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < cat.skus.size(); ++k) {
            if (!purchasable(k, m)) continue;
            double need = 0;
            bool ok = true;
            for (std::size_t j = 0; j < jobs.size() && ok; ++j) {
                if (unmet[j] <= 0) continue;
                const double gp = eligible(jobs[j], k) ? goodput(jobs[j].model, k, jobs[j].phase) : 0.0;
                if (gp <= 0)
                    ok = false;
                else
                    need += unmet[j] / gp;
            }
            if (!ok) continue;
            const long long n = std::max<long long>(1, static_cast<long long>(std::ceil(need - 1e-9)));
            if (refresh.purchase_mode == PurchaseMode::on_availability) {
                if (!best || rank[k] > rank[best->first]) best = std::make_pair(k, n);
            } else {
                const double cost = static_cast<double>(n) * cat.skus[k].server_cost_usd;
                if (cost < best_cost || (cost == best_cost && best && rank[k] > rank[best->first])) {
                    best_cost = cost;
                    best = std::make_pair(k, n);
                }
            }
        }
        return best;
    }

    void halt(const std::string& why) {
        halted = true;
        events.push_back(Event{month_at(t), EventKind::capacity_exhausted, why, 0});
    }

    bool step() {
        if (halted || t >= sc.demand.horizon_months) return false;
        const Month m = month_at(t);

        // (1) retirements
        for (std::size_t c = 0; c < cohorts.size();) {
            if (t - cohorts[c].purchased_at >= cohorts[c].lifetime) {
                events.push_back(Event{m, EventKind::decommission, cat.skus[cohorts[c].sku].id, cohorts[c].servers});
                cohorts.erase(cohorts.begin() + static_cast<std::ptrdiff_t>(c));
            } else {
                ++c;
            }
        }
        // (2) arrivals
        if (t > 0) {
            for (const auto& h : cat.skus)
                if (h.available_month() == m) events.push_back(Event{m, EventKind::sku_available, h.id, 0});
            for (const auto& md : cat.models)
                if (md.release_month == m) events.push_back(Event{m, EventKind::model_release, md.id, 0});
        }
        // (3) demand, (4) assignment
        const std::vector<Job> jobs = jobs_at(t);
        AssignmentInput in = build_assignment(jobs);
        AssignmentOutput out = assign_fleet(in);

        // (5) shortfall purchase
        // Purchases can shift work between jobs, so the gap may close only
        // geometrically; give up once an attempt stops making progress.
        double last_unmet = std::numeric_limits<double>::infinity();
        for (int attempt = 0; !out.feasible(); ++attempt) {
            double unmet = 0;
            for (double u : out.unmet_rps) unmet += u;
            const bool stalled = unmet >= last_unmet;
            last_unmet = unmet;
            if (attempt >= 64 || stalled) {
                halt("shortfall-unresolved");
                return false;
            }
            const auto pick = choose_purchase(jobs, out.unmet_rps);
            if (!pick) {
                halt("no-servable-sku");
                return false;
            }
            auto trial = cohorts;
            if (!trial.empty() && trial.back().sku == pick->first && trial.back().purchased_at == t)
                trial.back().servers += pick->second;
            else
                trial.push_back(LiveCohort{pick->first, t, pick->second, refresh.lifetime_for(cat.skus[pick->first].id)});
            if (required_watts(trial) > sc.design.facility_capacity_watts + 1e-6) {
                halt("power-capacity");
                return false;
            }
            cohorts = std::move(trial);
            events.push_back(Event{m, EventKind::purchase, cat.skus[pick->first].id, pick->second});
            in = build_assignment(jobs);
            out = assign_fleet(in);
        }
        update_facility(t);

        // (6) utilization and cost
        const double prov_rps = peak_demand_at(sc.demand, t) / (op.infra_scheduling ? op.headroom_factor : 1.0);
        const double mean_ratio = demand_at(sc.demand, t) / prov_rps;
        std::vector<double> used(cohorts.size(), 0.0);
        for (std::size_t j = 0; j < jobs.size(); ++j)
            for (std::size_t c = 0; c < cohorts.size(); ++c) used[c] += out.servers_used[j][c];

        CostSnapshot snap;
        snap.cohorts.reserve(cohorts.size());
        std::vector<double> mean_util(cohorts.size());
        for (std::size_t c = 0; c < cohorts.size(); ++c) {
            const auto& co = cohorts[c];
            const HardwareSku& h = cat.skus[co.sku];
            const double peak_u = std::min(1.0, used[c] / static_cast<double>(co.servers));
            mean_util[c] = std::min(1.0, peak_u * mean_ratio);
            const double life_years = std::min(sc.schedule.it_years, co.lifetime / 12.0);
            snap.cohorts.push_back(CostCohort{h.server_cost_usd, h.tdp_server_watts, co.servers,
                                              (t - co.purchased_at) / 12.0, life_years, mean_util[c], peak_u});
        }
        snap.facility.reserve(tranches.size());
        for (const auto& tr : tranches) snap.facility.push_back(FacilityTranche{tr.watts, tr.slots, (t - tr.built_at) / 12.0});
        const auto usd = annual_tco_usd(snap, sc.design, sc.prices, sc.schedule);
        if (years.empty() || years.back().year != m.year()) years.push_back(YearAccumulator{m.year()});
        YearAccumulator& acc = years.back();
        ++acc.months;
        for (std::size_t k = 0; k < usd.size(); ++k)
            if (k != 6) acc.usd[k] += usd[k] / 12.0;
        acc.peak_usd_max = std::max(acc.peak_usd_max, usd[6]);

        if (keep_timeline) record_state(m, jobs, in, out, mean_util);
        ++t;
        return true;
    }

    void record_state(Month m, const std::vector<Job>& jobs, const AssignmentInput& in, const AssignmentOutput& out,
                      const std::vector<double>& mean_util) {
        FleetState s;
        s.month = m;
        s.peak_demand_rps = peak_demand_at(sc.demand, t);
        s.mean_demand_rps = demand_at(sc.demand, t);
        for (const auto& c : cohorts)
            s.cohorts.push_back(Cohort{cat.skus[c.sku].id, month_at(c.purchased_at), c.servers, c.lifetime});
        for (std::size_t j = 0; j < jobs.size(); ++j) {
            std::string key = cat.models[jobs[j].model].id;
            if (jobs[j].phase != Job::Phase::full) key += "/" + std::string(to_string(jobs[j].phase));
            auto& list = s.assignments[key];
            for (std::size_t c = 0; c < cohorts.size(); ++c) {
                const double served = out.servers_used[j][c] * in.goodput[j][c];
                if (served > 0) list.push_back(Assignment{c, served / jobs[j].demand_rps});
            }
        }
        s.utilization = mean_util;
        timeline.push_back(std::move(s));
        state = timeline.back();
    }

    SimulationResult finish(bool keep) {
        SimulationResult r;
        r.status = halted ? SimulationStatus::capacity_exhausted : SimulationStatus::completed;
        if (halted) r.halted_at = month_at(t);
        for (const auto& acc : years) {
            YearTco y;
            y.year = acc.year;
            for (std::size_t k = 0; k < acc.usd.size(); ++k) {
                const double v = k == 6 ? acc.peak_usd_max * acc.months / 12.0 : acc.usd[k];
                y.tco.component(k) = to_cents(v);
            }
            y.tco.recompute_total();
            r.lifetime_tco += y.tco.total;
            r.annual_tco.push_back(y);
        }
        r.event_log = events;
        if (keep) r.fleet_timeline = std::move(timeline);
        return r;
    }
};

Simulator::Simulator(const Scenario& scenario, const RefreshPolicy& refresh, const OperationPolicy& op)
    : impl_(new Impl{}) {
    impl_->sc = scenario;
    impl_->refresh = refresh;
    impl_->op = op;
    try {
        impl_->init();
    } catch (...) {
        delete impl_;
        throw;
    }
}

Simulator::~Simulator() { delete impl_; }

bool Simulator::step() { return impl_->step(); }
void Simulator::record_timeline(bool on) { impl_->keep_timeline = on; }
const FleetState& Simulator::state() const { return impl_->state; }
const std::vector<Event>& Simulator::events() const { return impl_->events; }
const ResolvedCatalog& Simulator::catalog() const { return impl_->cat; }
SimulationResult Simulator::finish(bool keep_timeline) { return impl_->finish(keep_timeline); }

SimulationResult simulate(const Scenario& scenario, const RefreshPolicy& refresh, const OperationPolicy& op,
                          const SimulationOptions& options) {
    Simulator sim(scenario, refresh, op);
    sim.record_timeline(options.record_timeline);
    while (sim.step()) {
    }
    return sim.finish(options.record_timeline);
}

SimulationResult simulate(const Scenario& scenario, const InfrastructureDesign& design, const RefreshPolicy& refresh,
                          const OperationPolicy& op, const SimulationOptions& options) {
    Scenario s = scenario;
    s.design = design;
    return simulate(s, refresh, op, options);
}

std::string_view to_string(PurchaseMode m) {
    return m == PurchaseMode::on_availability ? "on-availability" : "on-demand";
}

std::string_view to_string(EventKind k) {
    switch (k) {
        case EventKind::purchase: return "purchase";
        case EventKind::decommission: return "decommission";
        case EventKind::model_release: return "model-release";
        case EventKind::sku_available: return "sku-available";
        case EventKind::capacity_exhausted: return "capacity-exhausted";
    }
    return "purchase";
}

std::string_view to_string(Job::Phase p) {
    switch (p) {
        case Job::Phase::full: return "full";
        case Job::Phase::prefill: return "prefill";
        case Job::Phase::decode: return "decode";
    }
    return "full";
}

PurchaseMode parse_purchase_mode(std::string_view t) {
    if (t == "on-availability") return PurchaseMode::on_availability;
    if (t == "on-demand") return PurchaseMode::on_demand;
    throw ValidationError("refresh.purchase_mode", "unknown purchase mode '" + std::string(t) + "'");
}

}  // namespace dclc
