#pragma once

#include <optional>

#include "dclc/catalog.hpp"

namespace dclc {

struct WorkloadShape {
    int seq_len_prompt = 128;
    int seq_len_decode = 32;
    int batch_size = 8;

    bool operator==(const WorkloadShape&) const = default;
};

// Per-batch resource needs of one inference replica. The prefill terms cover
// the whole batch of prompts; the decode terms cover one step of the batch.
struct RequirementProfile {
    double prefill_flops = 0;
    double prefill_bytes = 0;
    double decode_flops_per_token = 0;
    double decode_bytes_per_token = 0;
    double weight_footprint = 0;
    double kv_footprint_per_request = 0;
    int batch_size = 1;
    int decode_tokens = 0;

    bool operator==(const RequirementProfile&) const = default;
};

struct LatencyEstimate {
    double ttft_ms = 0;
    double tbt_ms = 0;
};

struct SloSpec {
    double ttft_ms_max = 400;
    double tbt_ms_max = 100;

    bool operator==(const SloSpec&) const = default;
};

struct EfficiencyMetrics {
    double goodput_rps = 0;  // per server
    double goodput_per_watt = 0;
    double goodput_per_watt_per_dollar = 0;
    int tensor_parallel = 0;
    int replicas_per_server = 0;
};

enum class TpSelection { smallest_feasible, max_goodput };

// Calibration knobs shared by every latency evaluation.
struct PerfConfig {
    double gpu_efficiency = 0.4;
    double cpu_efficiency = 0.4;
    double tp_penalty = 0.05;
    // Fraction of accelerator memory usable for weights and KV state.
    double usable_memory_fraction = 0.9;
    // Extra multiplier on achieved throughput, e.g. from the network tier.
    double derate = 1.0;
    // Server cost is spread over this many years for the per-dollar metric.
    double amortization_years = 5.0;
    TpSelection tp_selection = TpSelection::smallest_feasible;

    bool operator==(const PerfConfig&) const = default;
};

std::string_view to_string(TpSelection t);
TpSelection parse_tp_selection(std::string_view text);

void validate(const WorkloadShape& shape);
void validate(const SloSpec& slo);

RequirementProfile model_requirements(const ModelSpec& model, const WorkloadShape& shape);

// Scales the compute and byte terms independently. Used by operation-stage
// optimizations (quantization, KV management, architecture changes).
struct RequirementScale {
    double compute = 1.0;
    double weight_bytes = 1.0;
    double kv_bytes = 1.0;
    double prefill_compute = 1.0;  // prompt-only work, e.g. reused prefixes
    // Fraction of weights touched per token. Scales FLOPs and the per-step
    // weight read, not the footprint.
    double active = 1.0;

    bool operator==(const RequirementScale&) const = default;
};
RequirementProfile scale_requirements(const RequirementProfile& req, const RequirementScale& scale);

bool fits_in_memory(const RequirementProfile& req, const HardwareSku& sku, int tensor_parallel,
                    const PerfConfig& cfg = {});

// Latency at zero load. Throws ModelDoesNotFit.
LatencyEstimate unloaded_latency(const RequirementProfile& req, const HardwareSku& sku,
                                 int tensor_parallel, const PerfConfig& cfg = {});

// Requests/s one replica can absorb before latencies diverge.
double throughput_ceiling(const RequirementProfile& req, const HardwareSku& sku, int tensor_parallel,
                          const PerfConfig& cfg = {});

// Per-replica latency under `load_rps`. Returns nullopt when the load is at or
// beyond the replica's throughput ceiling. Throws ModelDoesNotFit.
std::optional<LatencyEstimate> roofline_latency(const RequirementProfile& req, const HardwareSku& sku,
                                                int tensor_parallel, double load_rps,
                                                const PerfConfig& cfg = {});

inline constexpr double kGoodputResolution = 0.1;

// Per-server goodput over tensor-parallel degrees in {1,2,4,8} (capped by
// accelerators per server) that fit memory and meet the SLO at zero load:
// the smallest such degree, or with TpSelection::max_goodput the one with
// the highest goodput (smallest on ties). Throws ModelUnservable.
EfficiencyMetrics max_goodput(const RequirementProfile& req, const HardwareSku& sku, const SloSpec& slo,
                              const PerfConfig& cfg = {});
EfficiencyMetrics max_goodput(const ModelSpec& model, const WorkloadShape& shape, const HardwareSku& sku,
                              const SloSpec& slo, const PerfConfig& cfg = {});

// Reference implementation of the goodput search: linear scan at the
// declared resolution. Slow; used by tests.
double goodput_linear_scan(const RequirementProfile& req, const HardwareSku& sku, int tensor_parallel,
                           const SloSpec& slo, const PerfConfig& cfg = {});

struct Provisioning {
    long long servers = 0;
    double utilization = 0;
};

Provisioning provision(double demand_rps, double per_server_goodput);
Provisioning provision(double demand_rps, const ModelSpec& model, const WorkloadShape& shape,
                       const HardwareSku& sku, const SloSpec& slo, const PerfConfig& cfg = {});

}  // namespace dclc
