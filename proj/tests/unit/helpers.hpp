#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "dclc/scenario_io.hpp"

namespace testutil {

inline std::filesystem::path data_dir() { return DCLC_TEST_DATA_DIR; }

inline dclc::HardwareSku gpu(std::string id, double flops, double bw, double mem, double tdp = 10200,
                             double cost = 375000, int accel = 8) {
    dclc::HardwareSku h;
    h.id = std::move(id);
    h.lineage = "test";
    h.release_month = dclc::Month::of(2022, 1);
    h.peak_flops = flops;
    h.mem_bandwidth = bw;
    h.mem_capacity = mem;
    h.tdp_server_watts = tdp;
    h.accelerators_per_server = accel;
    h.server_cost_usd = cost;
    h.interconnect = dclc::Interconnect::nvlink;
    return h;
}

inline dclc::ModelSpec dense(std::string id, double params, int layers = 80, int hidden = 8192,
                             double kv = 327680) {
    dclc::ModelSpec m;
    m.id = std::move(id);
    m.lineage = "flagship";
    m.release_month = dclc::Month::of(2022, 1);
    m.total_params = params;
    m.active_params = params;
    m.layers = layers;
    m.hidden_dim = hidden;
    m.kv_bytes_per_token = kv;
    return m;
}

inline dclc::ScenarioDocument baseline() {
    return dclc::load_scenario_document(data_dir() / "scenarios" / "baseline.json");
}

inline dclc::CostSnapshot random_snapshot(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    dclc::CostSnapshot s;
    const int cohorts = static_cast<int>(6 * u(rng));
    for (int i = 0; i < cohorts; ++i) {
        const double peak = u(rng);
        s.cohorts.push_back(dclc::CostCohort{20000 + 500000 * u(rng), 300 + 14000 * u(rng),
                                             static_cast<long long>(5000 * u(rng)), 8 * u(rng), 3 + 2 * u(rng),
                                             peak * u(rng), peak});
    }
    const int tranches = static_cast<int>(4 * u(rng));
    for (int i = 0; i < tranches; ++i)
        s.facility.push_back(dclc::FacilityTranche{5e7 * u(rng), 5000 * u(rng), 35 * u(rng)});
    return s;
}

inline dclc::PriceBook random_prices(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0);
    dclc::PriceBook p;
    p.network_capex_per_server *= u(rng);
    p.building_capex_per_sqft *= u(rng);
    p.power_capex_per_watt *= u(rng);
    p.cooling_capex_per_watt *= u(rng);
    p.network_opex_per_server_yr *= u(rng);
    p.energy_tariff_per_mwh *= u(rng);
    p.peak_demand_charge_per_kw_month *= u(rng);
    p.maintenance_per_server_yr *= u(rng);
    p.software_per_server_yr *= u(rng);
    return p;
}

}  // namespace testutil
