#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dclc/lifecycle.hpp"

namespace dclc {

struct Triangular {
    double min = 0.15, mode = 0.15, max = 0.15;
    bool operator==(const Triangular&) const = default;
};

struct Uniform {
    double min = 0, max = 0;
    bool operator==(const Uniform&) const = default;
};

struct ScenarioDistribution {
    Scenario base;
    Triangular demand_growth{0.10, 0.15, 0.20};
    // Regimes indexed slow, medium, fast; weights must sum to 1.
    std::array<GrowthRegime, 3> model_regimes = default_regimes();
    std::array<double, 3> model_regime_weights{0.0, 1.0, 0.0};
    std::array<GrowthRegime, 3> hardware_regimes = default_regimes();
    std::array<double, 3> hardware_regime_weights{0.0, 1.0, 0.0};
    Uniform availability_delay_months{6, 12};
    Uniform energy_tariff{20, 40};
    double price_jitter = 0.1;

    static std::array<GrowthRegime, 3> default_regimes();
    // Every distribution collapsed onto the base scenario's own values.
    static ScenarioDistribution degenerate(const Scenario& base);

    bool operator==(const ScenarioDistribution&) const = default;
};

void validate(const ScenarioDistribution& dist);

// Seed of trial `index` under `master`; independent of the trial count.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index);

Scenario sample_scenario(const ScenarioDistribution& dist, std::uint64_t seed);

struct DesignChoice {
    PowerTopology power = PowerTopology::per_pdu;
    CoolingDesign cooling = CoolingDesign::air;
    NetworkDesign network = NetworkDesign::nvlink;

    int complexity() const;
    std::string label() const;
    bool operator==(const DesignChoice&) const = default;
};

std::vector<DesignChoice> all_design_choices();

struct PolicyBundle {
    DesignChoice design;
    RefreshPolicy refresh;
    OperationPolicy op;

    std::string label() const;
    bool operator==(const PolicyBundle&) const = default;
};

InfrastructureDesign resolve_design(const Scenario& scenario, const DesignChoice& choice);
SimulationResult simulate_bundle(const Scenario& scenario, const PolicyBundle& bundle,
                                 const SimulationOptions& options = {false});

struct TcoDistribution {
    int trials = 0;
    int completed = 0;
    int capacity_exhausted = 0;
    // Lifetime TCO in USD per trial, in trial order; NaN marks exhausted trials.
    std::vector<double> per_trial;
    double mean = 0;
    double stddev = 0;
    std::array<double, 5> percentiles{};  // 5, 25, 50, 75, 95
    double ratio_to_baseline = 1.0;

    double std_error() const;
    double objective_value(bool p95) const { return p95 ? percentiles[4] : mean; }
};

inline constexpr std::array<int, 5> kPercentileLevels = {5, 25, 50, 75, 95};

TcoDistribution summarize(std::vector<double> per_trial);

// Runs `body(i)` for i in [0, n) on up to `threads` workers; 0 picks the
// hardware concurrency.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned threads = 0);

struct MonteCarloOptions {
    unsigned threads = 0;
};

TcoDistribution monte_carlo(const ScenarioDistribution& dist, const PolicyBundle& bundle, int trials,
                            std::uint64_t seed, const MonteCarloOptions& options = {});

enum class EnumerationMode { one_at_a_time, full_factorial };

std::vector<RefreshPolicy> enumerate_refresh_policies(const std::vector<std::string>& generations,
                                                      const std::vector<int>& lifetimes,
                                                      EnumerationMode mode = EnumerationMode::one_at_a_time,
                                                      const RefreshPolicy& base = RefreshPolicy::baseline(),
                                                      std::size_t cap = 1000000);

// Purchasable GPU generations that become available within the horizon.
std::vector<std::string> refresh_generations(const Scenario& scenario);

struct PolicySpace {
    std::vector<DesignChoice> designs;
    std::vector<RefreshPolicy> refreshes;
    std::vector<OperationPolicy> ops;
    PolicyBundle baseline;

    std::size_t size() const { return designs.size() * refreshes.size() * ops.size(); }
    static PolicySpace single(const PolicyBundle& b) { return {{b.design}, {b.refresh}, {b.op}, b}; }
};

enum class Objective { mean, p95 };

struct CandidateResult {
    PolicyBundle bundle;
    TcoDistribution dist;
};

struct OptimizeResult {
    PolicyBundle best;
    TcoDistribution best_dist;
    TcoDistribution baseline_dist;
    double baseline_ratio = 1.0;
    std::vector<CandidateResult> candidates;  // evaluation order
};

struct OptimizeOptions {
    Objective objective = Objective::mean;
    int trials = 200;
    std::uint64_t seed = 1;
    unsigned threads = 0;
};

// Exhaustive evaluation of the space with common random numbers.
OptimizeResult optimize(const ScenarioDistribution& dist, const PolicySpace& space, const OptimizeOptions& options);

// Stage spaces around a baseline bundle.
PolicySpace build_space(const PolicyBundle& baseline);
PolicySpace refresh_space(const Scenario& scenario, const PolicyBundle& baseline,
                          const std::vector<int>& lifetimes = {0, 12, 24, 36, 48, 60, 72, 84, 96, 108, 120});
PolicySpace operation_singles_space(const PolicyBundle& baseline);

// Greedy flag pruning followed by exhaustive search over the strongest flags.
OptimizeResult optimize_operations(const ScenarioDistribution& dist, const PolicyBundle& baseline,
                                   const OptimizeOptions& options, int exhaustive_flags = 4);

struct CrossStageResult {
    OptimizeResult build;
    OptimizeResult refresh;
    OptimizeResult operation;
    OptimizeResult combined;
};

// Optimizes each stage around the baseline, then searches the product of the
// top `top_k` candidates of every stage.
CrossStageResult optimize_cross_stage(const ScenarioDistribution& dist, const PolicyBundle& baseline,
                                      const OptimizeOptions& options, int top_k = 2);

struct RegimeCell {
    int model_regime = 1;
    int hardware_regime = 1;
    PolicyBundle best;
    double baseline_ratio = 1.0;
};

std::vector<RegimeCell> regime_matrix(const ScenarioDistribution& dist, const PolicyBundle& baseline,
                                      const OptimizeOptions& options, int top_k = 2);

std::string_view regime_name(int index);
std::string_view to_string(Objective o);

}  // namespace dclc
