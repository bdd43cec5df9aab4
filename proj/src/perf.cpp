#include "dclc/perf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dclc/error.hpp"

namespace dclc {

void validate(const WorkloadShape& shape) {
    if (shape.seq_len_prompt < 1) throw ValidationError("workload.seq_len_prompt", "must be >= 1");
    if (shape.seq_len_decode < 0) throw ValidationError("workload.seq_len_decode", "must be >= 0");
    if (shape.batch_size < 1) throw ValidationError("workload.batch_size", "must be >= 1");
}

void validate(const SloSpec& slo) {
    if (!(slo.ttft_ms_max > 0)) throw ValidationError("slo.ttft_ms_max", "must be > 0");
    if (!(slo.tbt_ms_max > 0)) throw ValidationError("slo.tbt_ms_max", "must be > 0");
}

RequirementProfile model_requirements(const ModelSpec& model, const WorkloadShape& shape) {
    validate(model);
    validate(shape);
    const double b = shape.batch_size;
    const double context = shape.seq_len_prompt + shape.seq_len_decode;
    RequirementProfile r;
    r.batch_size = shape.batch_size;
    r.decode_tokens = shape.seq_len_decode;
    r.weight_footprint = model.total_params * model.bytes_per_param;
    r.kv_footprint_per_request = model.kv_bytes_per_token * context + model.state_bytes;
    r.prefill_flops = 2.0 * model.active_params * shape.seq_len_prompt * b;
    r.prefill_bytes = r.weight_footprint;
    r.decode_flops_per_token = 2.0 * model.active_params * b;
    r.decode_bytes_per_token = model.active_params * model.bytes_per_param + r.kv_footprint_per_request * b;
    return r;
}

RequirementProfile scale_requirements(const RequirementProfile& req, const RequirementScale& s) {
    RequirementProfile r = req;
    const double kv_decode = req.kv_footprint_per_request * req.batch_size;
    const double weight_decode = req.decode_bytes_per_token - kv_decode;
    r.prefill_flops *= s.compute * s.prefill_compute * s.active;
    r.decode_flops_per_token *= s.compute * s.active;
    r.weight_footprint *= s.weight_bytes;
    r.prefill_bytes *= s.weight_bytes;
    r.kv_footprint_per_request *= s.kv_bytes;
    r.decode_bytes_per_token = weight_decode * s.weight_bytes * s.active + kv_decode * s.kv_bytes;
    return r;
}

namespace {

double kind_efficiency(const HardwareSku& sku, const PerfConfig& cfg) {
    return sku.kind == SkuKind::gpu_server ? cfg.gpu_efficiency : cfg.cpu_efficiency;
}

double scaling(const HardwareSku& sku, int tp, const PerfConfig& cfg) {
    const double penalty = std::max(0.01, 1.0 - cfg.tp_penalty * std::log2(static_cast<double>(tp)));
    return tp * kind_efficiency(sku, cfg) * penalty * cfg.derate;
}

struct Unloaded {
    double ttft_s;
    double tbt_s;
    double ceiling_rps;
};

Unloaded evaluate(const RequirementProfile& req, const HardwareSku& sku, int tp, const PerfConfig& cfg) {
    if (tp < 1) throw ValidationError("tensor_parallel", "must be >= 1");
    if (!fits_in_memory(req, sku, tp, cfg))
        throw ModelDoesNotFit("model needs " + std::to_string(req.weight_footprint / 1e9) +
                              " GB of weights; " + sku.id + " TP" + std::to_string(tp) + " is too small");
    const double k = scaling(sku, tp, cfg);
    const double flops = sku.peak_flops * k;
    const double bw = sku.mem_bandwidth * k;
    Unloaded u{};
    u.ttft_s = std::max(req.prefill_flops / flops, req.prefill_bytes / bw);
    u.tbt_s = std::max(req.decode_flops_per_token / flops, req.decode_bytes_per_token / bw);
    const double busy = u.ttft_s + req.decode_tokens * u.tbt_s;
    u.ceiling_rps = busy > 0 ? req.batch_size / busy : std::numeric_limits<double>::infinity();
    return u;
}

bool meets(const Unloaded& u, double load_rps, const SloSpec& slo) {
    if (load_rps >= u.ceiling_rps) return false;
    const double inflation = 1.0 / (1.0 - load_rps / u.ceiling_rps);
    return u.ttft_s * 1e3 * inflation <= slo.ttft_ms_max && u.tbt_s * 1e3 * inflation <= slo.tbt_ms_max;
}

constexpr int kTensorParallelDegrees[] = {1, 2, 4, 8};

}  // namespace

bool fits_in_memory(const RequirementProfile& req, const HardwareSku& sku, int tp, const PerfConfig& cfg) {
    const double need = req.weight_footprint + req.batch_size * req.kv_footprint_per_request;
    return need <= sku.memory_per_accelerator() * tp * cfg.usable_memory_fraction;
}

LatencyEstimate unloaded_latency(const RequirementProfile& req, const HardwareSku& sku, int tp,
                                 const PerfConfig& cfg) {
    const Unloaded u = evaluate(req, sku, tp, cfg);
    return {u.ttft_s * 1e3, u.tbt_s * 1e3};
}

double throughput_ceiling(const RequirementProfile& req, const HardwareSku& sku, int tp,
                          const PerfConfig& cfg) {
    return evaluate(req, sku, tp, cfg).ceiling_rps;
}

std::optional<LatencyEstimate> roofline_latency(const RequirementProfile& req, const HardwareSku& sku, int tp,
                                                double load_rps, const PerfConfig& cfg) {
    if (load_rps < 0) throw ValidationError("load_rps", "must be >= 0");
    const Unloaded u = evaluate(req, sku, tp, cfg);
    if (load_rps >= u.ceiling_rps) return std::nullopt;
    const double inflation = 1.0 / (1.0 - load_rps / u.ceiling_rps);
    return LatencyEstimate{u.ttft_s * 1e3 * inflation, u.tbt_s * 1e3 * inflation};
}

namespace {

int replicas_for(const HardwareSku& sku, int tp) { return std::max(1, sku.accelerators_per_server / tp); }

// Largest k such that k * resolution of per-server load meets the SLO, or -1
// when even zero load misses it.
long long goodput_steps_binary(const Unloaded& u, int replicas, const SloSpec& slo) {
    if (!meets(u, 0.0, slo)) return -1;
    const double server_ceiling = u.ceiling_rps * replicas;
    long long lo = 0;
    long long hi = static_cast<long long>(std::ceil(server_ceiling / kGoodputResolution)) + 1;
    while (hi - lo > 1) {
        const long long mid = lo + (hi - lo) / 2;
        if (meets(u, mid * kGoodputResolution / replicas, slo))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

EfficiencyMetrics metrics_for(const HardwareSku& sku, int tp, double goodput, const PerfConfig& cfg) {
    EfficiencyMetrics m;
    m.tensor_parallel = tp;
    m.replicas_per_server = replicas_for(sku, tp);
    m.goodput_rps = goodput;
    m.goodput_per_watt = goodput / sku.tdp_server_watts;
    m.goodput_per_watt_per_dollar = m.goodput_per_watt / (sku.server_cost_usd / cfg.amortization_years);
    return m;
}

}  // namespace

double goodput_linear_scan(const RequirementProfile& req, const HardwareSku& sku, int tp, const SloSpec& slo,
                           const PerfConfig& cfg) {
    const Unloaded u = evaluate(req, sku, tp, cfg);
    const int replicas = replicas_for(sku, tp);
    if (!meets(u, 0.0, slo)) return 0.0;
    long long k = 0;
    while (meets(u, (k + 1) * kGoodputResolution / replicas, slo)) ++k;
    return k * kGoodputResolution;
}

EfficiencyMetrics max_goodput(const RequirementProfile& req, const HardwareSku& sku, const SloSpec& slo,
                              const PerfConfig& cfg) {
    validate(slo);
    int best_tp = 0;
    long long best_steps = -1;
    for (int tp : kTensorParallelDegrees) {
        if (tp > sku.accelerators_per_server) break;
        if (!fits_in_memory(req, sku, tp, cfg)) continue;
        const Unloaded u = evaluate(req, sku, tp, cfg);
        const long long steps = goodput_steps_binary(u, replicas_for(sku, tp), slo);
        if (steps > best_steps) {
            best_steps = steps;
            best_tp = tp;
            if (cfg.tp_selection == TpSelection::smallest_feasible) break;
        }
    }
    if (best_steps >= 0) return metrics_for(sku, best_tp, best_steps * kGoodputResolution, cfg);
    throw ModelUnservable("model-unservable-on-sku: no tensor-parallel degree fits " + sku.id +
                          " within the SLO");
}

EfficiencyMetrics max_goodput(const ModelSpec& model, const WorkloadShape& shape, const HardwareSku& sku,
                              const SloSpec& slo, const PerfConfig& cfg) {
    return max_goodput(model_requirements(model, shape), sku, slo, cfg);
}

Provisioning provision(double demand_rps, double per_server_goodput) {
    if (demand_rps < 0) throw ValidationError("demand_rps", "must be >= 0");
    if (demand_rps == 0) return {};
    if (!(per_server_goodput > 0)) throw ModelUnservable("per-server goodput is zero");
    Provisioning p;
    p.servers = static_cast<long long>(std::ceil(demand_rps / per_server_goodput - 1e-9));
    p.servers = std::max<long long>(p.servers, 1);
    if (p.servers * per_server_goodput < demand_rps) ++p.servers;
    p.utilization = demand_rps / (p.servers * per_server_goodput);
    return p;
}

Provisioning provision(double demand_rps, const ModelSpec& model, const WorkloadShape& shape,
                       const HardwareSku& sku, const SloSpec& slo, const PerfConfig& cfg) {
    return provision(demand_rps, max_goodput(model, shape, sku, slo, cfg).goodput_rps);
}

std::string_view to_string(TpSelection t) {
    return t == TpSelection::smallest_feasible ? "smallest-feasible" : "max-goodput";
}

TpSelection parse_tp_selection(std::string_view text) {
    if (text == "smallest-feasible") return TpSelection::smallest_feasible;
    if (text == "max-goodput") return TpSelection::max_goodput;
    throw ValidationError("perf.tp_selection", "unknown value '" + std::string(text) + "'");
}

}  // namespace dclc
