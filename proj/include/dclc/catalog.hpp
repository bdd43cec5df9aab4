#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dclc/units.hpp"

namespace dclc {

enum class SkuKind { gpu_server, cpu_server };
enum class Interconnect { ethernet, infiniband, nvlink };

// One server generation. Compute and bandwidth are per accelerator; memory,
// power and price are per server.
struct HardwareSku {
    std::string id;
    std::string lineage;
    SkuKind kind = SkuKind::gpu_server;
    Month release_month;
    int availability_delay_months = 0;
    double peak_flops = 0;     // FLOP/s per accelerator, dense FP16/BF16
    double mem_bandwidth = 0;  // bytes/s per accelerator
    double mem_capacity = 0;   // bytes per server
    double tdp_server_watts = 0;
    int accelerators_per_server = 1;
    double server_cost_usd = 0;
    Interconnect interconnect = Interconnect::ethernet;
    bool synthetic = false;

    Month available_month() const { return release_month + availability_delay_months; }
    double memory_per_accelerator() const { return mem_capacity / accelerators_per_server; }

    bool operator==(const HardwareSku&) const = default;
};

enum class Architecture { dense_transformer, moe, ssm };

struct ModelSpec {
    std::string id;
    std::string lineage;  // "flagship" models carry the demand, "small" ones are routing targets
    Month release_month;
    double total_params = 0;
    double active_params = 0;
    Architecture architecture = Architecture::dense_transformer;
    int layers = 0;
    int hidden_dim = 0;
    double bytes_per_param = 2;
    double kv_bytes_per_token = 0;
    double state_bytes = 0;  // fixed per-request recurrent state (ssm only)
    bool synthetic = false;

    bool operator==(const ModelSpec&) const = default;
};

enum class GrowthShape { slow_sublinear, medium_linear, fast_exponential };

// Projection regime. `rate` scales the steepness of the trend fitted to the
// seeds: 1.0 reproduces the historical trend, 2.0 doubles its slope.
struct GrowthRegime {
    GrowthShape shape = GrowthShape::medium_linear;
    double rate = 1.0;
    // Hardware only: keep per-server price at the last seed's value instead
    // of extrapolating it.
    bool flat_cost = false;

    bool operator==(const GrowthRegime&) const = default;
};

void validate(const HardwareSku& sku);
void validate(const ModelSpec& model);
void validate(const GrowthRegime& regime);

// Appends synthetic generations per lineage at the mean seed cadence until
// `horizon`. Lineages with a single seed are passed through unchanged.
std::vector<HardwareSku> project_hardware_roadmap(std::span<const HardwareSku> seeds, Month horizon,
                                                  const GrowthRegime& regime,
                                                  int synthetic_delay_months = 9);

std::vector<ModelSpec> project_model_roadmap(std::span<const ModelSpec> seeds, Month horizon,
                                             const GrowthRegime& regime);

const HardwareSku* find_sku(std::span<const HardwareSku> skus, std::string_view id);
const ModelSpec* find_model(std::span<const ModelSpec> models, std::string_view id);

std::string_view to_string(SkuKind kind);
std::string_view to_string(Interconnect ic);
std::string_view to_string(Architecture arch);
std::string_view to_string(GrowthShape shape);
SkuKind parse_sku_kind(std::string_view text);
Interconnect parse_interconnect(std::string_view text);
Architecture parse_architecture(std::string_view text);
GrowthShape parse_growth_shape(std::string_view text);

}  // namespace dclc
