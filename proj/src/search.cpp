#include "dclc/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "dclc/error.hpp"

namespace dclc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// mt19937_64 is specified bit-exactly by the standard; the distributions are
// not, so uniforms are derived by hand.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

double sample_triangular(const Triangular& t, double u) {
    if (t.max <= t.min) return t.mode;
    const double span = t.max - t.min;
    const double cut = (t.mode - t.min) / span;
    if (u < cut) return t.min + std::sqrt(u * span * (t.mode - t.min));
    return t.max - std::sqrt((1 - u) * span * (t.max - t.mode));
}

double sample_uniform(const Uniform& r, double u) { return r.max <= r.min ? r.min : r.min + u * (r.max - r.min); }

int sample_weighted(const std::array<double, 3>& w, double u) {
    double acc = 0;
    for (int i = 0; i < 3; ++i) {
        acc += w[i];
        if (u < acc) return i;
    }
    for (int i = 2; i >= 0; --i)
        if (w[i] > 0) return i;
    return 1;
}

}  // namespace

std::array<GrowthRegime, 3> ScenarioDistribution::default_regimes() {
    return {GrowthRegime{GrowthShape::slow_sublinear, 1.0, false}, GrowthRegime{GrowthShape::medium_linear, 1.0, false},
            GrowthRegime{GrowthShape::fast_exponential, 0.5, false}};
}

ScenarioDistribution ScenarioDistribution::degenerate(const Scenario& base) {
    ScenarioDistribution d;
    d.base = base;
    const double g = base.demand.annual_growth;
    d.demand_growth = {g, g, g};
    if (base.model_regime) d.model_regimes[1] = *base.model_regime;
    if (base.hardware_regime) d.hardware_regimes[1] = *base.hardware_regime;
    d.model_regime_weights = {0, 1, 0};
    d.hardware_regime_weights = {0, 1, 0};
    d.availability_delay_months = {static_cast<double>(base.synthetic_delay_months),
                                   static_cast<double>(base.synthetic_delay_months)};
    d.energy_tariff = {base.prices.energy_tariff_per_mwh, base.prices.energy_tariff_per_mwh};
    d.price_jitter = 0;
    return d;
}

void validate(const ScenarioDistribution& d) {
    validate(d.base);
    const auto& g = d.demand_growth;
    if (!(g.min <= g.mode && g.mode <= g.max)) throw ValidationError("distribution.demand_growth", "need min <= mode <= max");
    if (!(g.min > -1)) throw ValidationError("distribution.demand_growth", "growth must stay above -1");
    for (const auto* w : {&d.model_regime_weights, &d.hardware_regime_weights}) {
        double s = 0;
        for (double v : *w) {
            if (!(v >= 0)) throw ValidationError("distribution.regime_weights", "weights must be >= 0");
            s += v;
        }
        if (std::abs(s - 1) > 1e-9) throw ValidationError("distribution.regime_weights", "weights must sum to 1");
    }
    for (const auto& r : d.model_regimes) validate(r);
    for (const auto& r : d.hardware_regimes) validate(r);
    if (!(d.availability_delay_months.min >= 0 && d.availability_delay_months.min <= d.availability_delay_months.max))
        throw ValidationError("distribution.availability_delay_months", "need 0 <= min <= max");
    if (!(d.energy_tariff.min > 0 && d.energy_tariff.min <= d.energy_tariff.max))
        throw ValidationError("distribution.energy_tariff", "need 0 < min <= max");
    if (!(d.price_jitter >= 0 && d.price_jitter < 1))
        throw ValidationError("distribution.price_jitter", "must be within [0, 1)");
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

Scenario sample_scenario(const ScenarioDistribution& d, std::uint64_t seed) {
    Rng rng(seed);
    // Every variate is drawn on every call so the stream layout never depends
    // on which distributions are degenerate.
    const double u_growth = rng.uniform();
    const double u_model = rng.uniform();
    const double u_hw = rng.uniform();
    const double u_delay = rng.uniform();
    const double u_tariff = rng.uniform();
    std::array<double, 9> u_price{};
    for (double& u : u_price) u = rng.uniform();
    const double u_server = rng.uniform();

    Scenario s = d.base;
    s.defaulted_fields.clear();
    s.demand.annual_growth = sample_triangular(d.demand_growth, u_growth);
    if (s.model_regime) s.model_regime = d.model_regimes[sample_weighted(d.model_regime_weights, u_model)];
    if (s.hardware_regime) s.hardware_regime = d.hardware_regimes[sample_weighted(d.hardware_regime_weights, u_hw)];
    s.synthetic_delay_months = static_cast<int>(std::lround(sample_uniform(d.availability_delay_months, u_delay)));
    s.prices.energy_tariff_per_mwh = sample_uniform(d.energy_tariff, u_tariff);

    auto jitter = [&](double u) { return d.price_jitter == 0 ? 1.0 : 1.0 + d.price_jitter * (2 * u - 1); };
    double* prices[] = {&s.prices.network_capex_per_server,    &s.prices.building_capex_per_sqft,
                        &s.prices.power_capex_per_watt,        &s.prices.cooling_capex_per_watt,
                        &s.prices.network_opex_per_server_yr,  &s.prices.peak_demand_charge_per_kw_month,
                        &s.prices.maintenance_per_server_yr,   &s.prices.software_per_server_yr,
                        &s.prices.sqft_per_server};
    for (std::size_t i = 0; i < u_price.size(); ++i) *prices[i] *= jitter(u_price[i]);
    const double server_factor = jitter(u_server);
    if (server_factor != 1.0)
        for (auto& h : s.hardware_seeds) h.server_cost_usd *= server_factor;
    return s;
}

int DesignChoice::complexity() const {
    return static_cast<int>(power) + static_cast<int>(cooling) +
           (network == NetworkDesign::nvlink ? 3 : network == NetworkDesign::hierarchical ? 2 : static_cast<int>(network));
}

std::string DesignChoice::label() const {
    return std::string(to_string(power)) + "+" + std::string(to_string(cooling)) + "+" + std::string(to_string(network));
}

std::vector<DesignChoice> all_design_choices() {
    std::vector<DesignChoice> out;
    for (int p = 0; p < 3; ++p)
        for (int c = 0; c < 3; ++c)
            for (int n = 0; n < 4; ++n)
                out.push_back({static_cast<PowerTopology>(p), static_cast<CoolingDesign>(c), static_cast<NetworkDesign>(n)});
    return out;
}

namespace {

std::string refresh_label(const RefreshPolicy& r) {
    std::string s = "default=" + std::to_string(r.default_lifetime_months) + "/" + std::string(to_string(r.purchase_mode));
    for (const auto& [id, v] : r.lifetime_months_by_generation) s += ";" + id + "=" + std::to_string(v);
    return s;
}

std::string op_label(const OperationPolicy& op) {
    std::string s;
    for (int i = 0; i < OperationPolicy::kFlagCount; ++i)
        if (op.flag(i)) s += (s.empty() ? "" : "+") + std::string(OperationPolicy::flag_names[i]);
    return s.empty() ? "none" : s;
}

}  // namespace

std::string PolicyBundle::label() const { return design.label() + "|" + refresh_label(refresh) + "|" + op_label(op); }

InfrastructureDesign resolve_design(const Scenario& s, const DesignChoice& c) {
    return s.design_options.make(c.power, c.cooling, c.network, s.design);
}

SimulationResult simulate_bundle(const Scenario& s, const PolicyBundle& b, const SimulationOptions& options) {
    return simulate(s, resolve_design(s, b.design), b.refresh, b.op, options);
}

double TcoDistribution::std_error() const { return completed > 0 ? stddev / std::sqrt(static_cast<double>(completed)) : 0; }

TcoDistribution summarize(std::vector<double> per_trial) {
    TcoDistribution d;
    d.trials = static_cast<int>(per_trial.size());
    std::vector<double> ok;
    for (double v : per_trial)
        if (!std::isnan(v)) ok.push_back(v);
    d.per_trial = std::move(per_trial);
    d.completed = static_cast<int>(ok.size());
    d.capacity_exhausted = d.trials - d.completed;
    if (ok.empty()) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        d.mean = d.stddev = nan;
        d.percentiles.fill(nan);
        return d;
    }
    std::sort(ok.begin(), ok.end());
    // Sorted summation keeps the result independent of trial order.
    d.mean = std::accumulate(ok.begin(), ok.end(), 0.0) / static_cast<double>(ok.size());
    double ss = 0;
    for (double v : ok) ss += (v - d.mean) * (v - d.mean);
    d.stddev = ok.size() > 1 ? std::sqrt(ss / static_cast<double>(ok.size() - 1)) : 0.0;
    for (std::size_t i = 0; i < kPercentileLevels.size(); ++i) {
        const double pos = kPercentileLevels[i] / 100.0 * static_cast<double>(ok.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, ok.size() - 1);
        d.percentiles[i] = ok[lo] + (pos - static_cast<double>(lo)) * (ok[hi] - ok[lo]);
    }
    return d;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned threads) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

namespace {

double lifetime_usd(const Scenario& s, const PolicyBundle& b) {
    const SimulationResult r = simulate_bundle(s, b);
    if (r.status != SimulationStatus::completed) return std::numeric_limits<double>::quiet_NaN();
    return to_usd(r.lifetime_tco);
}

std::vector<Scenario> sample_trials(const ScenarioDistribution& dist, int trials, std::uint64_t seed) {
    std::vector<Scenario> out;
    out.reserve(static_cast<std::size_t>(trials));
    for (int i = 0; i < trials; ++i) out.push_back(sample_scenario(dist, trial_seed(seed, static_cast<std::uint64_t>(i))));
    return out;
}

}  // namespace

TcoDistribution monte_carlo(const ScenarioDistribution& dist, const PolicyBundle& bundle, int trials, std::uint64_t seed,
                            const MonteCarloOptions& options) {
    if (trials < 1) throw ValidationError("trials", "must be >= 1");
    validate(dist);
    std::vector<double> values(static_cast<std::size_t>(trials));
    parallel_for(
        values.size(),
        [&](std::size_t i) { values[i] = lifetime_usd(sample_scenario(dist, trial_seed(seed, i)), bundle); },
        options.threads);
    return summarize(std::move(values));
}

std::vector<RefreshPolicy> enumerate_refresh_policies(const std::vector<std::string>& generations,
                                                      const std::vector<int>& lifetimes, EnumerationMode mode,
                                                      const RefreshPolicy& base, std::size_t cap) {
    if (generations.empty()) throw ValidationError("generations", "empty");
    if (lifetimes.empty()) throw ValidationError("lifetimes", "empty");
    auto with = [&](RefreshPolicy p, const std::string& g, int life) {
        if (life == base.default_lifetime_months && !base.lifetime_months_by_generation.count(g))
            p.lifetime_months_by_generation.erase(g);
        else
            p.lifetime_months_by_generation[g] = life;
        return p;
    };
    std::vector<RefreshPolicy> out;
    if (mode == EnumerationMode::one_at_a_time) {
        for (const auto& g : generations)
            for (int life : lifetimes) out.push_back(with(base, g, life));
        for (const auto& p : out) validate(p);
        return out;
    }
    double size = 1;
    for (std::size_t i = 0; i < generations.size(); ++i) size *= static_cast<double>(lifetimes.size());
    if (size > static_cast<double>(cap))
        throw ValidationError("refresh.full_factorial",
                              "space of " + std::to_string(size) + " policies exceeds the cap of " + std::to_string(cap));
    out.push_back(base);
    for (const auto& g : generations) {
        std::vector<RefreshPolicy> next;
        next.reserve(out.size() * lifetimes.size());
        for (const auto& p : out)
            for (int life : lifetimes) next.push_back(with(p, g, life));
        out = std::move(next);
    }
    for (const auto& p : out) validate(p);
    return out;
}

std::vector<std::string> refresh_generations(const Scenario& s) {
    const ResolvedCatalog cat = resolve_catalog(s);
    std::vector<const HardwareSku*> gpus;
    for (const auto& h : cat.skus)
        if (h.kind == SkuKind::gpu_server && h.available_month() < s.end_month()) gpus.push_back(&h);
    std::stable_sort(gpus.begin(), gpus.end(), [](const HardwareSku* a, const HardwareSku* b) {
        return a->available_month() < b->available_month();
    });
    std::vector<std::string> ids;
    for (const auto* h : gpus) ids.push_back(h->id);
    return ids;
}

namespace {

long long lifetime_score(const RefreshPolicy& r) {
    long long s = 0;
    for (const auto& [id, v] : r.lifetime_months_by_generation) s += v - r.default_lifetime_months;
    return static_cast<long long>(r.default_lifetime_months) * 100000 + s;
}

// Strict "a is preferred over b" given equal objectives.
bool simpler(const PolicyBundle& a, const PolicyBundle& b) {
    if (a.design.complexity() != b.design.complexity()) return a.design.complexity() < b.design.complexity();
    if (lifetime_score(a.refresh) != lifetime_score(b.refresh)) return lifetime_score(a.refresh) > lifetime_score(b.refresh);
    return a.op.enabled_count() < b.op.enabled_count();
}

bool better(const CandidateResult& a, const CandidateResult& b, Objective obj) {
    if (a.dist.capacity_exhausted != b.dist.capacity_exhausted)
        return a.dist.capacity_exhausted < b.dist.capacity_exhausted;
    const double va = a.dist.objective_value(obj == Objective::p95);
    const double vb = b.dist.objective_value(obj == Objective::p95);
    if (va != vb) return va < vb;
    return simpler(a.bundle, b.bundle);
}

std::vector<PolicyBundle> expand(const PolicySpace& space) {
    std::vector<PolicyBundle> out;
    out.reserve(space.size());
    for (const auto& d : space.designs)
        for (const auto& r : space.refreshes)
            for (const auto& o : space.ops) out.push_back({d, r, o});
    return out;
}

OptimizeResult evaluate(const ScenarioDistribution& dist, std::vector<PolicyBundle> bundles, const PolicyBundle& baseline,
                        const OptimizeOptions& opt) {
    if (bundles.empty()) throw ValidationError("policy_space", "empty space");
    if (std::find(bundles.begin(), bundles.end(), baseline) == bundles.end())
        throw ValidationError("policy_space", "baseline bundle is not a member of the space");
    if (opt.trials < 1) throw ValidationError("trials", "must be >= 1");
    validate(dist);

    // Common random numbers: every candidate sees the same sampled scenarios.
    const std::vector<Scenario> scenarios = sample_trials(dist, opt.trials, opt.seed);
    const std::size_t nt = scenarios.size();
    std::vector<double> values(bundles.size() * nt);
    parallel_for(
        values.size(), [&](std::size_t k) { values[k] = lifetime_usd(scenarios[k % nt], bundles[k / nt]); }, opt.threads);

    OptimizeResult res;
    for (std::size_t b = 0; b < bundles.size(); ++b) {
        std::vector<double> v(values.begin() + static_cast<std::ptrdiff_t>(b * nt),
                              values.begin() + static_cast<std::ptrdiff_t>((b + 1) * nt));
        res.candidates.push_back({bundles[b], summarize(std::move(v))});
    }
    const bool p95 = opt.objective == Objective::p95;
    const auto base_it = std::find_if(res.candidates.begin(), res.candidates.end(),
                                      [&](const CandidateResult& c) { return c.bundle == baseline; });
    res.baseline_dist = base_it->dist;
    const double base_value = res.baseline_dist.objective_value(p95);
    for (auto& c : res.candidates) c.dist.ratio_to_baseline = c.dist.objective_value(p95) / base_value;
    res.baseline_dist.ratio_to_baseline = 1.0;

    std::size_t best = 0;
    for (std::size_t i = 1; i < res.candidates.size(); ++i)
        if (better(res.candidates[i], res.candidates[best], opt.objective)) best = i;
    res.best = res.candidates[best].bundle;
    res.best_dist = res.candidates[best].dist;
    res.baseline_ratio = res.best_dist.ratio_to_baseline;
    return res;
}

template <typename T>
void push_unique(std::vector<T>& v, const T& x) {
    if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

// Indices of candidates ordered best-first.
std::vector<std::size_t> ranking(const OptimizeResult& r, Objective obj) {
    std::vector<std::size_t> idx(r.candidates.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return better(r.candidates[a], r.candidates[b], obj); });
    return idx;
}

}  // namespace

OptimizeResult optimize(const ScenarioDistribution& dist, const PolicySpace& space, const OptimizeOptions& options) {
    std::vector<PolicyBundle> bundles = expand(space);
    return evaluate(dist, std::move(bundles), space.baseline, options);
}

PolicySpace build_space(const PolicyBundle& baseline) {
    PolicySpace s;
    s.designs = all_design_choices();
    s.refreshes = {baseline.refresh};
    s.ops = {baseline.op};
    s.baseline = baseline;
    return s;
}

PolicySpace refresh_space(const Scenario& scenario, const PolicyBundle& baseline, const std::vector<int>& lifetimes) {
    PolicySpace s;
    s.designs = {baseline.design};
    s.ops = {baseline.op};
    s.baseline = baseline;
    s.refreshes.push_back(baseline.refresh);
    const auto gens = refresh_generations(scenario);
    if (!gens.empty())
        for (const auto& p :
             enumerate_refresh_policies(gens, lifetimes, EnumerationMode::one_at_a_time, baseline.refresh))
            push_unique(s.refreshes, p);
    for (PurchaseMode mode : {PurchaseMode::on_availability, PurchaseMode::on_demand}) {
        for (int life : lifetimes) {
            if (life == 0) continue;
            RefreshPolicy p = baseline.refresh;
            p.default_lifetime_months = life;
            p.purchase_mode = mode;
            push_unique(s.refreshes, p);
        }
    }
    return s;
}

PolicySpace operation_singles_space(const PolicyBundle& baseline) {
    PolicySpace s;
    s.designs = {baseline.design};
    s.refreshes = {baseline.refresh};
    s.baseline = baseline;
    s.ops.push_back(baseline.op);
    for (int i = 0; i < OperationPolicy::kFlagCount; ++i) {
        OperationPolicy o = baseline.op;
        o.set_flag(i, !baseline.op.flag(i));
        if (o.flag(i)) s.ops.push_back(o);
    }
    OperationPolicy all = baseline.op;
    for (int i = 0; i < OperationPolicy::kFlagCount; ++i) all.set_flag(i, true);
    push_unique(s.ops, all);
    return s;
}

OptimizeResult optimize_operations(const ScenarioDistribution& dist, const PolicyBundle& baseline,
                                   const OptimizeOptions& options, int exhaustive_flags) {
    const PolicySpace singles = operation_singles_space(baseline);
    OptimizeResult first = optimize(dist, singles, options);
    const bool p95 = options.objective == Objective::p95;
    const double base = first.baseline_dist.objective_value(p95);

    // Greedy pass: keep flags that help on their own, strongest first.
    std::vector<std::pair<double, int>> helpful;
    for (const auto& c : first.candidates) {
        if (c.bundle.op.enabled_count() != baseline.op.enabled_count() + 1) continue;
        int flag = -1;
        for (int i = 0; i < OperationPolicy::kFlagCount; ++i)
            if (c.bundle.op.flag(i) && !baseline.op.flag(i)) flag = i;
        const double v = c.dist.objective_value(p95);
        if (c.dist.capacity_exhausted <= first.baseline_dist.capacity_exhausted && v < base) helpful.emplace_back(v, flag);
    }
    std::stable_sort(helpful.begin(), helpful.end());
    const std::size_t m = std::min<std::size_t>(helpful.size(), static_cast<std::size_t>(std::max(0, exhaustive_flags)));

    OperationPolicy fixed = baseline.op;
    for (std::size_t i = m; i < helpful.size(); ++i) fixed.set_flag(helpful[i].second, true);
    std::vector<OperationPolicy> ops;
    for (const auto& o : singles.ops) push_unique(ops, o);
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
        OperationPolicy o = fixed;
        for (std::size_t i = 0; i < m; ++i)
            if (mask & (std::size_t{1} << i)) o.set_flag(helpful[i].second, true);
        push_unique(ops, o);
    }
    PolicySpace full;
    full.designs = {baseline.design};
    full.refreshes = {baseline.refresh};
    full.ops = ops;
    full.baseline = baseline;
    return optimize(dist, full, options);
}

CrossStageResult optimize_cross_stage(const ScenarioDistribution& dist, const PolicyBundle& baseline,
                                      const OptimizeOptions& options, int top_k) {
    CrossStageResult r;
    r.build = optimize(dist, build_space(baseline), options);
    r.refresh = optimize(dist, refresh_space(dist.base, baseline), options);
    r.operation = optimize_operations(dist, baseline, options);

    PolicySpace space;
    space.baseline = baseline;
    const auto k = static_cast<std::size_t>(std::max(1, top_k));
    for (std::size_t i : ranking(r.build, options.objective))
        if (space.designs.size() < k) push_unique(space.designs, r.build.candidates[i].bundle.design);
    for (std::size_t i : ranking(r.refresh, options.objective))
        if (space.refreshes.size() < k) push_unique(space.refreshes, r.refresh.candidates[i].bundle.refresh);
    for (std::size_t i : ranking(r.operation, options.objective))
        if (space.ops.size() < k) push_unique(space.ops, r.operation.candidates[i].bundle.op);
    push_unique(space.designs, baseline.design);
    push_unique(space.refreshes, baseline.refresh);
    push_unique(space.ops, baseline.op);
    r.combined = optimize(dist, space, options);
    return r;
}

std::vector<RegimeCell> regime_matrix(const ScenarioDistribution& dist, const PolicyBundle& baseline,
                                      const OptimizeOptions& options, int top_k) {
    std::vector<RegimeCell> cells;
    for (int m = 0; m < 3; ++m) {
        for (int h = 0; h < 3; ++h) {
            ScenarioDistribution d = dist;
            d.model_regime_weights = {0, 0, 0};
            d.model_regime_weights[m] = 1;
            d.hardware_regime_weights = {0, 0, 0};
            d.hardware_regime_weights[h] = 1;
            if (!d.base.model_regime) d.base.model_regime = d.model_regimes[m];
            if (!d.base.hardware_regime) d.base.hardware_regime = d.hardware_regimes[h];
            const CrossStageResult r = optimize_cross_stage(d, baseline, options, top_k);
            cells.push_back({m, h, r.combined.best, r.combined.baseline_ratio});
        }
    }
    return cells;
}

std::string_view regime_name(int i) {
    switch (i) {
        case 0: return "slow";
        case 1: return "medium";
        case 2: return "fast";
    }
    return "medium";
}

std::string_view to_string(Objective o) { return o == Objective::mean ? "mean" : "p95"; }

}  // namespace dclc
