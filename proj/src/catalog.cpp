#include "dclc/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "dclc/error.hpp"

namespace dclc {

std::string Month::str() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", year(), month_of_year());
    return buf;
}

Month Month::parse(const std::string& text) {
    int y = 0, m = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%d-%d%c", &y, &m, &tail) != 2 || m < 1 || m > 12 || y < 1900 ||
        y > 2200) {
        throw ValidationError("", "expected calendar month as YYYY-MM, got '" + text + "'");
    }
    return Month::of(y, m);
}

std::string format_cents(Cents cents) {
    const bool negative = cents < 0;
    const auto magnitude = static_cast<unsigned long long>(negative ? -cents : cents);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%s%llu.%02llu", negative ? "-" : "", magnitude / 100,
                  magnitude % 100);
    return buf;
}

std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    std::string out = buf;
    // Avoid "-0.000" so identical values always render identically.
    if (out.find_first_not_of("-0.") == std::string::npos && out.front() == '-') out.erase(0, 1);
    return out;
}

void validate(const HardwareSku& sku) {
    const std::string where = "sku[" + sku.id + "]";
    if (sku.id.empty()) throw ValidationError("sku.id", "empty identifier");
    if (sku.availability_delay_months < 0)
        throw ValidationError(where + ".availability_delay_months", "must be >= 0");
    if (!(sku.peak_flops > 0)) throw ValidationError(where + ".peak_flops", "must be > 0");
    if (!(sku.mem_bandwidth > 0)) throw ValidationError(where + ".mem_bandwidth", "must be > 0");
    if (!(sku.mem_capacity > 0)) throw ValidationError(where + ".mem_capacity", "must be > 0");
    if (!(sku.tdp_server_watts > 0)) throw ValidationError(where + ".tdp_server_watts", "must be > 0");
    if (sku.accelerators_per_server < 1)
        throw ValidationError(where + ".accelerators_per_server", "must be >= 1");
    if (!(sku.server_cost_usd > 0)) throw ValidationError(where + ".server_cost_usd", "must be > 0");
}

void validate(const ModelSpec& model) {
    const std::string where = "model[" + model.id + "]";
    if (model.id.empty()) throw ValidationError("model.id", "empty identifier");
    if (!(model.total_params > 0)) throw ValidationError(where + ".total_params", "must be > 0");
    if (!(model.active_params > 0) || model.active_params > model.total_params)
        throw ValidationError(where + ".active_params", "must satisfy 0 < active <= total");
    if (model.architecture == Architecture::dense_transformer &&
        model.active_params != model.total_params)
        throw ValidationError(where + ".active_params", "dense models must have active == total");
    if (model.layers < 1) throw ValidationError(where + ".layers", "must be >= 1");
    if (model.hidden_dim < 1) throw ValidationError(where + ".hidden_dim", "must be >= 1");
    if (!(model.bytes_per_param > 0)) throw ValidationError(where + ".bytes_per_param", "must be > 0");
    if (model.kv_bytes_per_token < 0)
        throw ValidationError(where + ".kv_bytes_per_token", "must be >= 0");
    if (model.kv_bytes_per_token == 0 && model.architecture != Architecture::ssm)
        throw ValidationError(where + ".kv_bytes_per_token", "zero KV is only valid for ssm models");
    if (model.state_bytes < 0) throw ValidationError(where + ".state_bytes", "must be >= 0");
}

void validate(const GrowthRegime& regime) {
    if (!(regime.rate > 0)) throw ValidationError("regime.rate", "must be > 0");
}

namespace {

struct Trend {
    double last_value = 0;
    double slope = 0;  // per year; log-space slope for exponential regimes
};

Trend fit_trend(std::span<const double> years, std::span<const double> values, GrowthShape shape,
                bool non_decreasing) {
    const std::size_t n = years.size();
    std::vector<double> ys(values.begin(), values.end());
    if (shape == GrowthShape::fast_exponential) {
        for (auto& y : ys) y = std::log(y);
    }
    double tm = 0, ym = 0;
    for (std::size_t i = 0; i < n; ++i) {
        tm += years[i];
        ym += ys[i];
    }
    tm /= static_cast<double>(n);
    ym /= static_cast<double>(n);
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (years[i] - tm) * (ys[i] - ym);
        sxx += (years[i] - tm) * (years[i] - tm);
    }
    Trend t;
    t.last_value = values.back();
    t.slope = sxx > 0 ? sxy / sxx : 0.0;
    if (non_decreasing) t.slope = std::max(0.0, t.slope);
    return t;
}

double extrapolate(const Trend& t, const GrowthRegime& regime, double dt_years) {
    switch (regime.shape) {
        case GrowthShape::slow_sublinear:
            return t.last_value + regime.rate * t.slope * std::sqrt(dt_years);
        case GrowthShape::medium_linear:
            return t.last_value + regime.rate * t.slope * dt_years;
        case GrowthShape::fast_exponential:
            return t.last_value * std::exp(regime.rate * t.slope * dt_years);
    }
    return t.last_value;
}

int mean_cadence_months(std::span<const Month> releases) {
    if (releases.size() < 2) return 0;
    const double span = releases.back() - releases.front();
    return std::max(1, static_cast<int>(std::lround(span / static_cast<double>(releases.size() - 1))));
}

template <typename T>
Month last_release(std::span<const T> seeds) {
    Month last = seeds.front().release_month;
    for (const auto& s : seeds) last = std::max(last, s.release_month);
    return last;
}

template <typename T>
void check_seeds(std::span<const T> seeds, Month horizon, const char* what) {
    if (seeds.empty()) throw ValidationError(what, "seed list is empty");
    for (std::size_t i = 1; i < seeds.size(); ++i) {
        if (seeds[i].release_month < seeds[i - 1].release_month)
            throw ValidationError(what, "seeds are not in chronological order at '" + seeds[i].id + "'");
    }
    std::map<std::string, Month> last_in_lineage;
    for (const auto& s : seeds) {
        auto it = last_in_lineage.find(s.lineage);
        if (it != last_in_lineage.end() && !(it->second < s.release_month))
            throw ValidationError(what, "release months must strictly increase within lineage '" +
                                            s.lineage + "'");
        last_in_lineage[s.lineage] = s.release_month;
    }
    if (horizon < last_release(seeds))
        throw ValidationError(what, "horizon " + horizon.str() + " precedes the last seed release");
}

template <typename T>
std::map<std::string, std::vector<const T*>> by_lineage(std::span<const T> seeds) {
    std::map<std::string, std::vector<const T*>> groups;
    for (const auto& s : seeds) groups[s.lineage].push_back(&s);
    return groups;
}

std::string synthetic_id(const std::string& lineage, Month m) { return lineage + "-proj-" + m.str(); }

template <typename T>
void sort_chronologically(std::vector<T>& out) {
    std::stable_sort(out.begin(), out.end(),
                     [](const T& a, const T& b) { return a.release_month < b.release_month; });
}

void require_positive(double v, const std::string& id, const char* field) {
    if (!(v > 0) || !std::isfinite(v))
        throw ValidationError("sku[" + id + "]." + field,
                              "extrapolated value is not positive; check the growth regime");
}

}  // namespace

std::vector<HardwareSku> project_hardware_roadmap(std::span<const HardwareSku> seeds, Month horizon,
                                                  const GrowthRegime& regime,
                                                  int synthetic_delay_months) {
    check_seeds(seeds, horizon, "hardware_roadmap");
    validate(regime);
    std::vector<HardwareSku> out(seeds.begin(), seeds.end());

    for (const auto& [lineage, group] : by_lineage(seeds)) {
        if (group.size() < 2) continue;
        std::vector<Month> releases;
        std::vector<double> years, flops, bw, mem, tdp, cost;
        for (const HardwareSku* s : group) {
            releases.push_back(s->release_month);
            years.push_back(s->release_month.as_years());
            flops.push_back(s->peak_flops);
            bw.push_back(s->mem_bandwidth);
            mem.push_back(s->mem_capacity);
            tdp.push_back(s->tdp_server_watts);
            cost.push_back(s->server_cost_usd);
        }
        const int cadence = mean_cadence_months(releases);
        const Trend t_flops = fit_trend(years, flops, regime.shape, true);
        const Trend t_bw = fit_trend(years, bw, regime.shape, true);
        const Trend t_mem = fit_trend(years, mem, regime.shape, true);
        const Trend t_tdp = fit_trend(years, tdp, regime.shape, false);
        const Trend t_cost = fit_trend(years, cost, regime.shape, false);
        const HardwareSku& last = *group.back();

        for (Month m = last.release_month + cadence; m <= horizon; m = m + cadence) {
            const double dt = (m - last.release_month) / 12.0;
            HardwareSku s = last;
            s.id = synthetic_id(lineage, m);
            s.release_month = m;
            s.availability_delay_months = synthetic_delay_months;
            s.peak_flops = extrapolate(t_flops, regime, dt);
            s.mem_bandwidth = extrapolate(t_bw, regime, dt);
            s.mem_capacity = extrapolate(t_mem, regime, dt);
            s.tdp_server_watts = extrapolate(t_tdp, regime, dt);
            s.server_cost_usd = regime.flat_cost ? last.server_cost_usd : extrapolate(t_cost, regime, dt);
            s.synthetic = true;
            require_positive(s.peak_flops, s.id, "peak_flops");
            require_positive(s.mem_bandwidth, s.id, "mem_bandwidth");
            require_positive(s.mem_capacity, s.id, "mem_capacity");
            require_positive(s.tdp_server_watts, s.id, "tdp_server_watts");
            require_positive(s.server_cost_usd, s.id, "server_cost_usd");
            validate(s);
            out.push_back(std::move(s));
        }
    }
    sort_chronologically(out);
    return out;
}

std::vector<ModelSpec> project_model_roadmap(std::span<const ModelSpec> seeds, Month horizon,
                                             const GrowthRegime& regime) {
    check_seeds(seeds, horizon, "model_roadmap");
    validate(regime);
    std::vector<ModelSpec> out(seeds.begin(), seeds.end());

    for (const auto& [lineage, group] : by_lineage(seeds)) {
        if (group.size() < 2) continue;
        std::vector<Month> releases;
        std::vector<double> years, params;
        for (const ModelSpec* s : group) {
            releases.push_back(s->release_month);
            years.push_back(s->release_month.as_years());
            params.push_back(s->total_params);
        }
        const int cadence = mean_cadence_months(releases);
        const Trend trend = fit_trend(years, params, regime.shape, true);
        const ModelSpec& last = *group.back();
        const double active_ratio = last.active_params / last.total_params;

        for (Month m = last.release_month + cadence; m <= horizon; m = m + cadence) {
            const double dt = (m - last.release_month) / 12.0;
            ModelSpec s = last;
            s.id = synthetic_id(lineage, m);
            s.release_month = m;
            s.total_params = extrapolate(trend, regime, dt);
            if (!(s.total_params > 0) || !std::isfinite(s.total_params))
                throw ValidationError("model[" + s.id + "].total_params",
                                      "extrapolated value is not positive; check the growth regime");
            s.active_params = s.architecture == Architecture::dense_transformer
                                  ? s.total_params
                                  : std::min(s.total_params, s.total_params * active_ratio);
            // Width and depth share the growth; per-token state grows with layers x width.
            const double scale = s.total_params / last.total_params;
            const double edge = std::cbrt(scale);
            s.layers = std::max(1, static_cast<int>(std::lround(last.layers * edge)));
            s.hidden_dim = std::max(1, static_cast<int>(std::lround(last.hidden_dim * edge)));
            s.kv_bytes_per_token = last.kv_bytes_per_token * edge * edge;
            s.state_bytes = last.state_bytes * edge * edge;
            s.synthetic = true;
            validate(s);
            out.push_back(std::move(s));
        }
    }
    sort_chronologically(out);
    return out;
}

const HardwareSku* find_sku(std::span<const HardwareSku> skus, std::string_view id) {
    for (const auto& s : skus)
        if (s.id == id) return &s;
    return nullptr;
}

const ModelSpec* find_model(std::span<const ModelSpec> models, std::string_view id) {
    for (const auto& m : models)
        if (m.id == id) return &m;
    return nullptr;
}

std::string_view to_string(SkuKind kind) {
    return kind == SkuKind::gpu_server ? "gpu-server" : "cpu-server";
}

std::string_view to_string(Interconnect ic) {
    switch (ic) {
        case Interconnect::ethernet: return "ethernet";
        case Interconnect::infiniband: return "infiniband";
        case Interconnect::nvlink: return "nvlink";
    }
    return "ethernet";
}

std::string_view to_string(Architecture arch) {
    switch (arch) {
        case Architecture::dense_transformer: return "dense-transformer";
        case Architecture::moe: return "moe";
        case Architecture::ssm: return "ssm";
    }
    return "dense-transformer";
}

std::string_view to_string(GrowthShape shape) {
    switch (shape) {
        case GrowthShape::slow_sublinear: return "slow-sublinear";
        case GrowthShape::medium_linear: return "medium-linear";
        case GrowthShape::fast_exponential: return "fast-exponential";
    }
    return "medium-linear";
}

SkuKind parse_sku_kind(std::string_view text) {
    if (text == "gpu-server") return SkuKind::gpu_server;
    if (text == "cpu-server") return SkuKind::cpu_server;
    throw ValidationError("kind", "unknown SKU kind '" + std::string(text) + "'");
}

Interconnect parse_interconnect(std::string_view text) {
    if (text == "ethernet") return Interconnect::ethernet;
    if (text == "infiniband") return Interconnect::infiniband;
    if (text == "nvlink") return Interconnect::nvlink;
    throw ValidationError("interconnect_class", "unknown interconnect '" + std::string(text) + "'");
}

Architecture parse_architecture(std::string_view text) {
    if (text == "dense-transformer") return Architecture::dense_transformer;
    if (text == "moe") return Architecture::moe;
    if (text == "ssm") return Architecture::ssm;
    throw ValidationError("architecture", "unknown architecture '" + std::string(text) + "'");
}

GrowthShape parse_growth_shape(std::string_view text) {
    if (text == "slow-sublinear") return GrowthShape::slow_sublinear;
    if (text == "medium-linear") return GrowthShape::medium_linear;
    if (text == "fast-exponential") return GrowthShape::fast_exponential;
    throw ValidationError("shape", "unknown growth shape '" + std::string(text) + "'");
}

}  // namespace dclc
