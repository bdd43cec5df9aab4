#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "dclc/catalog.hpp"
#include "dclc/units.hpp"

namespace dclc {

struct PriceBook {
    double network_capex_per_server = 2000;
    double building_capex_per_sqft = 0.5;
    double power_capex_per_watt = 7.0;
    double cooling_capex_per_watt = 2.5;
    double network_opex_per_server_yr = 600;
    double energy_tariff_per_mwh = 30;
    double peak_demand_charge_per_kw_month = 10;
    double maintenance_per_server_yr = 5000;
    double software_per_server_yr = 200;
    double sqft_per_server = 8;

    bool operator==(const PriceBook&) const = default;
};

enum class DepreciationMethod { straight_line, declining_balance };

struct AmortizationSchedule {
    double facility_years = 25;
    double network_years = 8;
    double it_years = 5;
    DepreciationMethod method = DepreciationMethod::straight_line;

    bool operator==(const AmortizationSchedule&) const = default;
};

enum class PowerTopology { per_pdu, per_udomain, per_dc };
enum class CoolingDesign { air, hybrid, liquid };
enum class NetworkDesign { ethernet, infiniband, nvlink, hierarchical };

struct PowerSpec {
    PowerTopology topology = PowerTopology::per_dc;
    double domain_budget_watts = 0;  // ignored for per-dc: the facility is one domain
    double capex_multiplier = 1.0;

    bool operator==(const PowerSpec&) const = default;
};

struct CoolingSpec {
    CoolingDesign design = CoolingDesign::hybrid;
    double pue = 1.15;
    double capex_multiplier = 1.25;
    // Servers above this TDP run throttled by `throttle_factor`.
    double density_limit_watts = 1e12;
    double throttle_factor = 1.0;
    double maintenance_multiplier = 1.0;

    bool operator==(const CoolingSpec&) const = default;
};

struct NetworkSpec {
    NetworkDesign design = NetworkDesign::hierarchical;
    double capex_multiplier = 1.0;
    double opex_multiplier = 1.0;
    // Fraction of single-node throughput retained by tensor-parallel groups
    // and replicas communicating over this fabric.
    double perf_factor = 1.0;

    bool operator==(const NetworkSpec&) const = default;
};

struct InfrastructureDesign {
    PowerSpec power;
    CoolingSpec cooling;
    NetworkSpec network;
    double facility_capacity_watts = 10e6;
    // Server draw = tdp * (idle + (1 - idle) * utilization).
    double idle_power_fraction = 0.3;

    bool operator==(const InfrastructureDesign&) const = default;
};

// Parameter table for every build-stage option; a design is one pick per row.
struct DesignOptions {
    std::array<PowerSpec, 3> power;
    std::array<CoolingSpec, 3> cooling;
    std::array<NetworkSpec, 4> network;

    static DesignOptions defaults();
    InfrastructureDesign make(PowerTopology p, CoolingDesign c, NetworkDesign n,
                              const InfrastructureDesign& base) const;

    bool operator==(const DesignOptions&) const = default;
};

void validate(const PriceBook& prices);
void validate(const AmortizationSchedule& schedule);
void validate(const InfrastructureDesign& design);

struct TcoBreakdown {
    Cents capex_it = 0;
    Cents capex_network = 0;
    Cents capex_building = 0;
    Cents capex_power = 0;
    Cents capex_cooling = 0;
    Cents opex_energy = 0;
    Cents opex_peak_power = 0;
    Cents opex_maintenance = 0;
    Cents opex_network = 0;
    Cents opex_software = 0;
    Cents total = 0;

    static constexpr std::array<std::string_view, 10> component_names = {
        "capex_it",        "capex_network",    "capex_building", "capex_power",   "capex_cooling",
        "opex_energy",     "opex_peak_power",  "opex_maintenance", "opex_network", "opex_software"};

    std::array<Cents, 10> components() const;
    Cents& component(std::size_t i);
    Cents sum_components() const;
    void recompute_total() { total = sum_components(); }
    TcoBreakdown& operator+=(const TcoBreakdown& o);

    bool operator==(const TcoBreakdown&) const = default;
};

// Annual charge for an asset in its `years_in_service`-th year. Declining
// balance writes off 2/lifetime of the remaining value each year and the
// residual in the final year.
double amortize(double cost, double lifetime_years, double years_in_service,
                DepreciationMethod method = DepreciationMethod::straight_line);

struct StrandedPower {
    long long servers = 0;
    double stranded_watts = 0;
};
StrandedPower stranded_power(double domain_budget_watts, double server_tdp_watts);

double domain_budget(const InfrastructureDesign& design);
long long fleet_capacity(const InfrastructureDesign& design, double server_tdp_watts);
// Facility watts that must be provisioned to host `servers` of one TDP class.
double provisioned_watts_for(const InfrastructureDesign& design, long long servers, double server_tdp_watts);

struct EnergyCost {
    double energy_usd = 0;
    double peak_usd = 0;
    double total() const { return energy_usd + peak_usd; }
};
EnergyCost energy_opex(double it_energy_mwh, double pue, double tariff_per_mwh, double peak_kw,
                       double demand_charge_per_kw_month);

// Cooling throttle and network efficiency combined into one throughput factor.
double design_derate(const InfrastructureDesign& design, const HardwareSku& sku);

// Inputs to one annual cost evaluation.
struct CostCohort {
    double unit_cost_usd = 0;
    double tdp_watts = 0;
    long long servers = 0;
    double age_years = 0;
    double it_life_years = 5;  // amortization period for this cohort
    double mean_utilization = 0;
    double peak_utilization = 0;
};

struct FacilityTranche {
    double watts = 0;
    double server_slots = 0;
    double age_years = 0;
};

struct CostSnapshot {
    std::vector<CostCohort> cohorts;
    std::vector<FacilityTranche> facility;
};

// Annualized cost of a fleet held in the given state for a whole year,
// unrounded and in component order.
std::array<double, 10> annual_tco_usd(const CostSnapshot& snapshot, const InfrastructureDesign& design,
                                      const PriceBook& prices, const AmortizationSchedule& schedule);
// Same, rounded per component to cents.
TcoBreakdown annual_tco(const CostSnapshot& snapshot, const InfrastructureDesign& design,
                        const PriceBook& prices, const AmortizationSchedule& schedule);

// Single-year view of a facility filled to capacity with one SKU.
struct FacilitySnapshot {
    long long servers = 0;
    double stranded_watts = 0;
    double facility_energy_mwh = 0;
    TcoBreakdown tco;
};
FacilitySnapshot facility_snapshot(const InfrastructureDesign& design, const HardwareSku& sku,
                                   double power_utilization, const PriceBook& prices,
                                   const AmortizationSchedule& schedule);

std::string_view to_string(PowerTopology p);
std::string_view to_string(CoolingDesign c);
std::string_view to_string(NetworkDesign n);
std::string_view to_string(DepreciationMethod m);
PowerTopology parse_power_topology(std::string_view text);
CoolingDesign parse_cooling_design(std::string_view text);
NetworkDesign parse_network_design(std::string_view text);
DepreciationMethod parse_depreciation_method(std::string_view text);

}  // namespace dclc
