#include <doctest.h>

#include <cmath>
#include <set>

#include "dclc/error.hpp"
#include "dclc/search.hpp"
#include "helpers.hpp"

using namespace dclc;

namespace {

// Baseline cut to a few years so Monte Carlo loops stay cheap.
ScenarioDistribution short_baseline(int months = 36) {
    auto doc = testutil::baseline();
    doc.distribution.base.demand.horizon_months = months;
    return doc.distribution;
}

PolicyBundle baseline_bundle() { return testutil::baseline().policy; }

}  // namespace

TEST_CASE("trial seeds and sampling are deterministic") {
    const auto dist = short_baseline();
    CHECK(trial_seed(1, 0) == trial_seed(1, 0));
    CHECK(trial_seed(1, 0) != trial_seed(1, 1));
    CHECK(trial_seed(1, 0) != trial_seed(2, 0));
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(trial_seed(7, i));
    CHECK(seen.size() == 10000);
    CHECK(sample_scenario(dist, 42) == sample_scenario(dist, 42));
    CHECK_FALSE(sample_scenario(dist, 42) == sample_scenario(dist, 43));
}

TEST_CASE("degenerate distribution samples the base scenario") {
    const auto base = short_baseline().base;
    const auto d = ScenarioDistribution::degenerate(base);
    for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
        Scenario s = sample_scenario(d, seed);
        Scenario b = base;
        b.defaulted_fields.clear();
        CHECK(s == b);
    }
}

TEST_CASE("demand growth sample mean within 3 standard errors of the triangular mean") {
    const auto dist = short_baseline();
    const auto& t = dist.demand_growth;
    const double mean = (t.min + t.mode + t.max) / 3;
    const double var =
        (t.min * t.min + t.mode * t.mode + t.max * t.max - t.min * t.mode - t.min * t.max - t.mode * t.max) / 18;
    const int n = 10000;
    double sum = 0, lo = 1, hi = -1;
    for (int i = 0; i < n; ++i) {
        const double g = sample_scenario(dist, trial_seed(5, i)).demand.annual_growth;
        sum += g;
        lo = std::min(lo, g);
        hi = std::max(hi, g);
    }
    CHECK(std::abs(sum / n - mean) <= 3 * std::sqrt(var / n));
    CHECK(lo >= t.min);
    CHECK(hi <= t.max);
}

TEST_CASE("distribution validation") {
    auto d = short_baseline();
    d.model_regime_weights = {0.5, 0.6, 0};
    CHECK_THROWS_AS(validate(d), ValidationError);
    d = short_baseline();
    d.demand_growth = {0.2, 0.1, 0.3};
    CHECK_THROWS_AS(validate(d), ValidationError);
    d = short_baseline();
    d.price_jitter = 1.0;
    CHECK_THROWS_AS(validate(d), ValidationError);
}

TEST_CASE("summarize") {
    const auto d = summarize({4, 1, 3, 2, 5});
    CHECK(d.mean == 3);
    CHECK(d.stddev == doctest::Approx(std::sqrt(2.5)));
    CHECK(d.percentiles[2] == 3);
    CHECK(d.percentiles[0] == doctest::Approx(1.2));
    CHECK(d.percentiles[4] == doctest::Approx(4.8));
    const auto one = summarize({7});
    CHECK(one.stddev == 0);
    CHECK(one.std_error() == 0);
    const auto partial = summarize({1, std::nan(""), 3});
    CHECK(partial.completed == 2);
    CHECK(partial.capacity_exhausted == 1);
    CHECK(partial.mean == 2);
}

TEST_CASE("monte carlo: single trial, prefix property, thread independence") {
    const auto dist = short_baseline();
    const auto b = baseline_bundle();
    const auto one = monte_carlo(dist, b, 1, 3);
    CHECK(one.trials == 1);
    CHECK(one.stddev == 0);
    CHECK(one.per_trial[0] == to_usd(simulate_bundle(sample_scenario(dist, trial_seed(3, 0)), b).lifetime_tco));

    const auto small = monte_carlo(dist, b, 8, 3, {1});
    const auto large = monte_carlo(dist, b, 24, 3, {8});
    for (std::size_t i = 0; i < small.per_trial.size(); ++i) CHECK(small.per_trial[i] == large.per_trial[i]);
    CHECK(monte_carlo(dist, b, 24, 3, {1}).per_trial == large.per_trial);
    CHECK_THROWS_AS(monte_carlo(dist, b, 0, 3), ValidationError);
}

TEST_CASE("monte carlo: standard error shrinks like 1/sqrt(n)") {
    const auto dist = short_baseline(24);
    const auto b = baseline_bundle();
    const auto a = monte_carlo(dist, b, 25, 11);
    const auto c = monte_carlo(dist, b, 100, 11);
    REQUIRE(a.std_error() > 0);
    const double ratio = a.std_error() / c.std_error();
    CHECK(ratio > 1.4);
    CHECK(ratio < 2.8);
}

TEST_CASE("refresh enumeration") {
    std::vector<std::string> gens;
    for (int i = 0; i < 10; ++i) gens.push_back("g" + std::to_string(i));
    const std::vector<int> lifetimes = {0, 12, 24, 36, 48, 60, 72, 84, 96, 108, 120};
    CHECK(enumerate_refresh_policies(gens, lifetimes).size() == 110);
    for (const auto& p : enumerate_refresh_policies(gens, {60})) CHECK(p == RefreshPolicy::baseline());
    const auto skips = enumerate_refresh_policies(gens, {0});
    REQUIRE(skips.size() == gens.size());
    for (std::size_t i = 0; i < gens.size(); ++i) {
        CHECK(skips[i].skips(gens[i]));
        CHECK(skips[i].lifetime_months_by_generation.size() == 1);
    }
    const auto full = enumerate_refresh_policies({"a", "b"}, {0, 36, 60}, EnumerationMode::full_factorial);
    CHECK(full.size() == 9);
    CHECK_THROWS_AS(enumerate_refresh_policies(gens, lifetimes, EnumerationMode::full_factorial), ValidationError);
    CHECK_THROWS_AS(enumerate_refresh_policies(gens, {6}), ValidationError);
}

TEST_CASE("stage spaces") {
    const auto b = baseline_bundle();
    const auto build = build_space(b);
    CHECK(build.designs.size() == 36);
    CHECK(all_design_choices().size() == 36);
    CHECK(std::count(build.designs.begin(), build.designs.end(), b.design) == 1);
    const auto ops = operation_singles_space(b);
    CHECK(ops.ops.size() == 2 + OperationPolicy::kFlagCount);
    const auto gens = refresh_generations(testutil::baseline().scenario);
    CHECK_FALSE(gens.empty());
    const auto refresh = refresh_space(testutil::baseline().scenario, b);
    CHECK(refresh.refreshes.size() >= gens.size() * 10);
    CHECK(std::count(refresh.refreshes.begin(), refresh.refreshes.end(), b.refresh) == 1);
}

TEST_CASE("optimize over the baseline alone returns it with ratio 1") {
    const auto dist = short_baseline();
    const auto b = baseline_bundle();
    const auto r = optimize(dist, PolicySpace::single(b), {Objective::mean, 6, 1, 0});
    CHECK(r.best == b);
    CHECK(r.baseline_ratio == 1.0);
    PolicySpace missing = PolicySpace::single(b);
    missing.baseline.op.quantization = true;
    CHECK_THROWS_AS(optimize(dist, missing, {Objective::mean, 2, 1, 0}), ValidationError);
}

TEST_CASE("optimize: best is no worse than any candidate, results thread-independent") {
    const auto dist = short_baseline();
    const auto b = baseline_bundle();
    const auto space = operation_singles_space(b);
    const auto r = optimize(dist, space, {Objective::mean, 6, 9, 1});
    for (const auto& c : r.candidates) CHECK(r.best_dist.mean <= c.dist.mean);
    CHECK(r.baseline_ratio <= 1.0);
    const auto p = optimize(dist, space, {Objective::mean, 6, 9, 8});
    REQUIRE(p.candidates.size() == r.candidates.size());
    for (std::size_t i = 0; i < r.candidates.size(); ++i)
        CHECK(p.candidates[i].dist.per_trial == r.candidates[i].dist.per_trial);
    const auto q = optimize(dist, space, {Objective::p95, 6, 9, 0});
    for (const auto& c : q.candidates) CHECK(q.best_dist.percentiles[4] <= c.dist.percentiles[4]);
}

TEST_CASE("cross-stage optimum is no worse than any stage optimum") {
    const auto dist = short_baseline(24);
    const auto r = optimize_cross_stage(dist, baseline_bundle(), {Objective::mean, 3, 2, 0}, 2);
    CHECK(r.combined.best_dist.mean <= r.build.best_dist.mean);
    CHECK(r.combined.best_dist.mean <= r.refresh.best_dist.mean);
    CHECK(r.combined.best_dist.mean <= r.operation.best_dist.mean);
    CHECK(r.combined.baseline_ratio <= 1.0);
}

TEST_CASE("regime matrix is deterministic") {
    const auto dist = short_baseline(12);
    const OptimizeOptions opt{Objective::mean, 2, 4, 0};
    const auto a = regime_matrix(dist, baseline_bundle(), opt, 1);
    const auto b = regime_matrix(dist, baseline_bundle(), opt, 1);
    REQUIRE(a.size() == 9);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].best == b[i].best);
        CHECK(a[i].baseline_ratio == b[i].baseline_ratio);
        CHECK(a[i].baseline_ratio <= 1.0);
    }
}
