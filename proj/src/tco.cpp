#include "dclc/tco.hpp"

#include <algorithm>
#include <cmath>

#include "dclc/error.hpp"

namespace dclc {

DesignOptions DesignOptions::defaults() {
    DesignOptions o;
    o.power = {PowerSpec{PowerTopology::per_pdu, 20e3, 1.0},
               PowerSpec{PowerTopology::per_udomain, 100e3, 1.08},
               PowerSpec{PowerTopology::per_dc, 0, 1.15}};
    o.cooling = {CoolingSpec{CoolingDesign::air, 1.30, 1.0, 8000, 0.94, 1.0},
                 CoolingSpec{CoolingDesign::hybrid, 1.15, 1.25, 1e12, 1.0, 1.0},
                 CoolingSpec{CoolingDesign::liquid, 1.08, 1.6, 1e12, 1.0, 1.1}};
    o.network = {NetworkSpec{NetworkDesign::ethernet, 1.0, 1.0, 0.85},
                 NetworkSpec{NetworkDesign::infiniband, 1.75, 1.75, 0.93},
                 NetworkSpec{NetworkDesign::nvlink, 10.0, 10.0, 1.0},
                 NetworkSpec{NetworkDesign::hierarchical, 1.9, 1.9, 1.0}};
    return o;
}

InfrastructureDesign DesignOptions::make(PowerTopology p, CoolingDesign c, NetworkDesign n,
                                         const InfrastructureDesign& base) const {
    InfrastructureDesign d = base;
    d.power = power[static_cast<std::size_t>(p)];
    d.cooling = cooling[static_cast<std::size_t>(c)];
    d.network = network[static_cast<std::size_t>(n)];
    return d;
}

void validate(const PriceBook& p) {
    const std::pair<const char*, double> fields[] = {
        {"prices.network_capex_per_server", p.network_capex_per_server},
        {"prices.building_capex_per_sqft", p.building_capex_per_sqft},
        {"prices.power_capex_per_watt", p.power_capex_per_watt},
        {"prices.cooling_capex_per_watt", p.cooling_capex_per_watt},
        {"prices.network_opex_per_server_yr", p.network_opex_per_server_yr},
        {"prices.energy_tariff_per_mwh", p.energy_tariff_per_mwh},
        {"prices.peak_demand_charge_per_kw_month", p.peak_demand_charge_per_kw_month},
        {"prices.maintenance_per_server_yr", p.maintenance_per_server_yr},
        {"prices.software_per_server_yr", p.software_per_server_yr},
        {"prices.sqft_per_server", p.sqft_per_server},
    };
    for (const auto& [name, value] : fields)
        if (!(value >= 0) || !std::isfinite(value)) throw ValidationError(name, "must be a finite value >= 0");
}

void validate(const AmortizationSchedule& s) {
    if (!(s.facility_years >= 15 && s.facility_years <= 30))
        throw ValidationError("schedule.facility_years", "must be within 15..30");
    if (!(s.network_years >= 7 && s.network_years <= 10))
        throw ValidationError("schedule.network_years", "must be within 7..10");
    if (!(s.it_years >= 3 && s.it_years <= 5)) throw ValidationError("schedule.it_years", "must be within 3..5");
}

void validate(const InfrastructureDesign& d) {
    if (d.power.topology != PowerTopology::per_dc && !(d.power.domain_budget_watts > 0))
        throw ValidationError("design.power.domain_budget_watts", "must be > 0");
    if (!(d.power.capex_multiplier > 0)) throw ValidationError("design.power.capex_multiplier", "must be > 0");
    if (!(d.cooling.pue >= 1.0)) throw ValidationError("design.cooling.pue", "must be >= 1.0");
    if (!(d.cooling.capex_multiplier > 0))
        throw ValidationError("design.cooling.capex_multiplier", "must be > 0");
    if (!(d.cooling.throttle_factor > 0 && d.cooling.throttle_factor <= 1))
        throw ValidationError("design.cooling.throttle_factor", "must be within (0, 1]");
    if (!(d.cooling.density_limit_watts > 0))
        throw ValidationError("design.cooling.density_limit_watts", "must be > 0");
    if (!(d.cooling.maintenance_multiplier > 0))
        throw ValidationError("design.cooling.maintenance_multiplier", "must be > 0");
    if (!(d.network.capex_multiplier > 0)) throw ValidationError("design.network.capex_multiplier", "must be > 0");
    if (!(d.network.opex_multiplier > 0)) throw ValidationError("design.network.opex_multiplier", "must be > 0");
    if (!(d.network.perf_factor > 0 && d.network.perf_factor <= 1))
        throw ValidationError("design.network.perf_factor", "must be within (0, 1]");
    if (!(d.facility_capacity_watts > 0)) throw ValidationError("design.facility_capacity_watts", "must be > 0");
    if (!(d.idle_power_fraction >= 0 && d.idle_power_fraction <= 1))
        throw ValidationError("design.idle_power_fraction", "must be within [0, 1]");
}

std::array<Cents, 10> TcoBreakdown::components() const {
    return {capex_it,    capex_network,   capex_building,   capex_power,  capex_cooling,
            opex_energy, opex_peak_power, opex_maintenance, opex_network, opex_software};
}

Cents& TcoBreakdown::component(std::size_t i) {
    Cents* fields[] = {&capex_it,    &capex_network,   &capex_building,   &capex_power,  &capex_cooling,
                       &opex_energy, &opex_peak_power, &opex_maintenance, &opex_network, &opex_software};
    return *fields[i];
}

Cents TcoBreakdown::sum_components() const {
    Cents s = 0;
    for (Cents c : components()) s += c;
    return s;
}

TcoBreakdown& TcoBreakdown::operator+=(const TcoBreakdown& o) {
    const auto other = o.components();
    for (std::size_t i = 0; i < other.size(); ++i) component(i) += other[i];
    total += o.total;
    return *this;
}

double amortize(double cost, double lifetime_years, double years_in_service, DepreciationMethod method) {
    if (!(cost >= 0)) throw ValidationError("cost", "must be >= 0");
    if (!(lifetime_years > 0)) throw ValidationError("lifetime_years", "must be > 0");
    if (!(years_in_service >= 0)) throw ValidationError("years_in_service", "must be >= 0");
    if (years_in_service >= lifetime_years) return 0.0;
    if (method == DepreciationMethod::straight_line) return cost / lifetime_years;

    const double rate = std::min(1.0, 2.0 / lifetime_years);
    const int year = static_cast<int>(std::floor(years_in_service));
    const int last_year = static_cast<int>(std::ceil(lifetime_years)) - 1;
    const double remaining = cost * std::pow(1.0 - rate, year);
    if (year >= last_year) return remaining;
    return remaining * rate;
}

StrandedPower stranded_power(double x, double y) {
    if (!(x > 0)) throw ValidationError("domain_budget_watts", "must be > 0");
    if (!(y > 0)) throw ValidationError("server_tdp_watts", "must be > 0");
    StrandedPower s;
    s.servers = static_cast<long long>(std::floor(x / y));
    s.stranded_watts = x - y * static_cast<double>(s.servers);
    if (s.stranded_watts < 0) s.stranded_watts = 0;  // floating-point guard
    return s;
}

double domain_budget(const InfrastructureDesign& d) {
    if (d.power.topology == PowerTopology::per_dc) return d.facility_capacity_watts;
    return std::min(d.power.domain_budget_watts, d.facility_capacity_watts);
}

long long fleet_capacity(const InfrastructureDesign& d, double tdp) {
    const double budget = domain_budget(d);
    const double full = std::floor(d.facility_capacity_watts / budget);
    const double remainder = d.facility_capacity_watts - full * budget;
    long long servers = static_cast<long long>(full) * stranded_power(budget, tdp).servers;
    if (remainder > 1e-9) servers += stranded_power(remainder, tdp).servers;
    return servers;
}

double provisioned_watts_for(const InfrastructureDesign& d, long long servers, double tdp) {
    if (servers <= 0) return 0.0;
    if (d.power.topology == PowerTopology::per_dc) return static_cast<double>(servers) * tdp;
    const double budget = domain_budget(d);
    const long long per_domain = stranded_power(budget, tdp).servers;
    if (per_domain == 0) return static_cast<double>(servers) * budget;  // one oversized server per domain
    const long long domains = (servers + per_domain - 1) / per_domain;
    return static_cast<double>(domains) * budget;
}

EnergyCost energy_opex(double it_energy_mwh, double pue, double tariff, double peak_kw, double demand_charge) {
    if (!(it_energy_mwh >= 0) || !(tariff >= 0) || !(peak_kw >= 0) || !(demand_charge >= 0))
        throw ValidationError("energy_opex", "inputs must be >= 0");
    if (!(pue >= 1.0)) throw ValidationError("pue", "must be >= 1.0");
    EnergyCost e;
    e.energy_usd = it_energy_mwh * pue * tariff;
    e.peak_usd = peak_kw * pue * demand_charge * 12.0;
    return e;
}

double design_derate(const InfrastructureDesign& d, const HardwareSku& sku) {
    double f = d.network.perf_factor;
    if (sku.tdp_server_watts > d.cooling.density_limit_watts) f *= d.cooling.throttle_factor;
    return f;
}

std::array<double, 10> annual_tco_usd(const CostSnapshot& snap, const InfrastructureDesign& d,
                                      const PriceBook& p, const AmortizationSchedule& s) {
    double it = 0, servers = 0, energy_mwh = 0, peak_kw = 0;
    for (const CostCohort& c : snap.cohorts) {
        if (c.servers <= 0) continue;
        const double n = static_cast<double>(c.servers);
        it += amortize(n * c.unit_cost_usd, c.it_life_years, c.age_years, s.method);
        servers += n;
        const double idle = d.idle_power_fraction;
        energy_mwh += n * c.tdp_watts * (idle + (1 - idle) * c.mean_utilization) * kHoursPerYear / 1e6;
        peak_kw += n * c.tdp_watts * (idle + (1 - idle) * c.peak_utilization) / 1e3;
    }
    double network = 0, building = 0, power = 0, cooling = 0;
    for (const FacilityTranche& t : snap.facility) {
        network += amortize(t.server_slots * p.network_capex_per_server * d.network.capex_multiplier,
                            s.network_years, t.age_years, s.method);
        building += amortize(t.server_slots * p.sqft_per_server * p.building_capex_per_sqft, s.facility_years,
                             t.age_years, s.method);
        power += amortize(t.watts * p.power_capex_per_watt * d.power.capex_multiplier, s.facility_years,
                          t.age_years, s.method);
        cooling += amortize(t.watts * p.cooling_capex_per_watt * d.cooling.capex_multiplier, s.facility_years,
                            t.age_years, s.method);
    }
    const EnergyCost e =
        energy_opex(energy_mwh, d.cooling.pue, p.energy_tariff_per_mwh, peak_kw, p.peak_demand_charge_per_kw_month);

    return {it,
            network,
            building,
            power,
            cooling,
            e.energy_usd,
            e.peak_usd,
            servers * p.maintenance_per_server_yr * d.cooling.maintenance_multiplier,
            servers * p.network_opex_per_server_yr * d.network.opex_multiplier,
            servers * p.software_per_server_yr};
}

TcoBreakdown annual_tco(const CostSnapshot& snap, const InfrastructureDesign& d, const PriceBook& p,
                        const AmortizationSchedule& s) {
    const auto usd = annual_tco_usd(snap, d, p, s);
    TcoBreakdown b;
    for (std::size_t i = 0; i < usd.size(); ++i) b.component(i) = to_cents(usd[i]);
    b.recompute_total();
    return b;
}

FacilitySnapshot facility_snapshot(const InfrastructureDesign& d, const HardwareSku& sku, double power_utilization,
                                   const PriceBook& p, const AmortizationSchedule& s) {
    if (!(power_utilization >= 0 && power_utilization <= 1))
        throw ValidationError("utilization", "must be within [0, 1]");
    FacilitySnapshot out;
    out.servers = fleet_capacity(d, sku.tdp_server_watts);
    out.stranded_watts = d.facility_capacity_watts - static_cast<double>(out.servers) * sku.tdp_server_watts;

    CostSnapshot snap;
    snap.cohorts.push_back(CostCohort{sku.server_cost_usd, sku.tdp_server_watts, out.servers, 0.0, s.it_years,
                                      power_utilization, power_utilization});
    snap.facility.push_back(FacilityTranche{d.facility_capacity_watts, static_cast<double>(out.servers), 0.0});
    out.tco = annual_tco(snap, d, p, s);

    // The facility bills its whole IT envelope: the GPU servers plus whatever
    // non-GPU load fills the remaining capacity, all at the stated power utilization.
    const double it_mwh = d.facility_capacity_watts * power_utilization * kHoursPerYear / 1e6;
    const double peak_kw = d.facility_capacity_watts * power_utilization / 1e3;
    const EnergyCost e =
        energy_opex(it_mwh, d.cooling.pue, p.energy_tariff_per_mwh, peak_kw, p.peak_demand_charge_per_kw_month);
    out.facility_energy_mwh = it_mwh * d.cooling.pue;
    out.tco.opex_energy = to_cents(e.energy_usd);
    out.tco.opex_peak_power = to_cents(e.peak_usd);
    out.tco.recompute_total();
    return out;
}

std::string_view to_string(PowerTopology p) {
    switch (p) {
        case PowerTopology::per_pdu: return "per-pdu";
        case PowerTopology::per_udomain: return "per-udomain";
        case PowerTopology::per_dc: return "per-dc";
    }
    return "per-dc";
}

std::string_view to_string(CoolingDesign c) {
    switch (c) {
        case CoolingDesign::air: return "air";
        case CoolingDesign::hybrid: return "hybrid";
        case CoolingDesign::liquid: return "liquid";
    }
    return "hybrid";
}

std::string_view to_string(NetworkDesign n) {
    switch (n) {
        case NetworkDesign::ethernet: return "ethernet";
        case NetworkDesign::infiniband: return "infiniband";
        case NetworkDesign::nvlink: return "nvlink";
        case NetworkDesign::hierarchical: return "hierarchical";
    }
    return "hierarchical";
}

std::string_view to_string(DepreciationMethod m) {
    return m == DepreciationMethod::straight_line ? "straight-line" : "declining-balance";
}

PowerTopology parse_power_topology(std::string_view t) {
    if (t == "per-pdu") return PowerTopology::per_pdu;
    if (t == "per-udomain") return PowerTopology::per_udomain;
    if (t == "per-dc") return PowerTopology::per_dc;
    throw ValidationError("power_topology", "unknown topology '" + std::string(t) + "'");
}

CoolingDesign parse_cooling_design(std::string_view t) {
    if (t == "air") return CoolingDesign::air;
    if (t == "hybrid") return CoolingDesign::hybrid;
    if (t == "liquid") return CoolingDesign::liquid;
    throw ValidationError("cooling", "unknown cooling design '" + std::string(t) + "'");
}

NetworkDesign parse_network_design(std::string_view t) {
    if (t == "ethernet") return NetworkDesign::ethernet;
    if (t == "infiniband") return NetworkDesign::infiniband;
    if (t == "nvlink") return NetworkDesign::nvlink;
    if (t == "hierarchical") return NetworkDesign::hierarchical;
    throw ValidationError("network", "unknown network design '" + std::string(t) + "'");
}

DepreciationMethod parse_depreciation_method(std::string_view t) {
    if (t == "straight-line") return DepreciationMethod::straight_line;
    if (t == "declining-balance") return DepreciationMethod::declining_balance;
    throw ValidationError("schedule.method", "unknown depreciation method '" + std::string(t) + "'");
}

}  // namespace dclc
