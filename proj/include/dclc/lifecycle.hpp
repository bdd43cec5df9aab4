#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dclc/catalog.hpp"
#include "dclc/perf.hpp"
#include "dclc/tco.hpp"

namespace dclc {

struct DemandTrajectory {
    double base_rps = 100000;
    double annual_growth = 0.15;
    std::array<double, 24> diurnal_shape = default_diurnal_shape();
    int horizon_months = 180;

    double peak_factor() const;
    static std::array<double, 24> default_diurnal_shape();

    bool operator==(const DemandTrajectory&) const = default;
};

void validate(const DemandTrajectory& demand);

// Mean-of-day request rate `month` months after the start.
double demand_at(const DemandTrajectory& traj, int month);
// Peak-of-day request rate; what capacity is provisioned against.
double peak_demand_at(const DemandTrajectory& traj, int month);

enum class PurchaseMode { on_availability, on_demand };

struct RefreshPolicy {
    // SKU id -> lifetime in months; 0 skips the generation entirely.
    std::map<std::string, int> lifetime_months_by_generation;
    int default_lifetime_months = 60;
    PurchaseMode purchase_mode = PurchaseMode::on_availability;

    int lifetime_for(const std::string& sku_id) const;
    bool skips(const std::string& sku_id) const { return lifetime_for(sku_id) == 0; }
    static RefreshPolicy baseline() { return {}; }

    bool operator==(const RefreshPolicy&) const = default;
};

void validate(const RefreshPolicy& policy);

struct OperationPolicy {
    bool migration_smoothing = false;
    int migration_window_months = 9;
    bool quantization = false;
    double quant_compute_factor = 0.9;
    double quant_memory_factor = 0.7;
    bool kv_cache_mgmt = false;
    double kv_byte_factor = 0.7;
    bool disaggregation = false;
    bool alt_architectures = false;
    double alt_active_fraction = 0.85;
    bool model_routing = false;
    double small_model_fraction = 0.3;
    bool hetero_scheduling = false;
    bool infra_scheduling = false;
    double headroom_factor = 1.2;

    static constexpr int kFlagCount = 8;
    static constexpr std::array<const char*, kFlagCount> flag_names = {
        "migration_smoothing", "quantization",     "kv_cache_mgmt",     "disaggregation",
        "alt_architectures",   "model_routing",    "hetero_scheduling", "infra_scheduling"};
    bool flag(int i) const;
    void set_flag(int i, bool on);
    int enabled_count() const;
    static OperationPolicy all_enabled();

    bool operator==(const OperationPolicy&) const = default;
};

void validate(const OperationPolicy& policy);

// Multiplicative effect of the operation policy on one model's requirements
// and on how its demand is split.
struct RequirementModifier {
    RequirementScale scale;
    double new_model_share = 1.0;  // rest stays on the predecessor release
    double routed_fraction = 0.0;  // sent to the latest small model
};

RequirementModifier effective_requirements(const ModelSpec& model, const OperationPolicy& policy,
                                           int months_since_release);

struct InitialCohort {
    std::string sku;
    long long count = -1;  // -1: size to the first month's demand

    bool operator==(const InitialCohort&) const = default;
};

struct Scenario {
    int schema_version = 1;
    Month start_month = Month::of(2015, 1);
    DemandTrajectory demand;
    WorkloadShape workload;
    SloSpec slo;
    PerfConfig perf;

    std::vector<ModelSpec> model_seeds;
    std::optional<GrowthRegime> model_regime;  // absent: use the seeds as an explicit list
    std::vector<HardwareSku> hardware_seeds;
    std::optional<GrowthRegime> hardware_regime;
    int synthetic_delay_months = 9;

    std::string demand_lineage = "flagship";
    std::string small_lineage = "small";
    std::vector<InitialCohort> initial_fleet;

    InfrastructureDesign design;
    DesignOptions design_options = DesignOptions::defaults();
    PriceBook prices;
    AmortizationSchedule schedule;

    // Fields filled from defaults at load time; informational only.
    std::vector<std::string> defaulted_fields;

    Month end_month() const { return start_month + demand.horizon_months; }

    bool operator==(const Scenario& o) const;
};

void validate(const Scenario& scenario);

// Catalog after projection to the end of the horizon.
struct ResolvedCatalog {
    std::vector<HardwareSku> skus;
    std::vector<ModelSpec> models;
};
ResolvedCatalog resolve_catalog(const Scenario& scenario);

struct Cohort {
    std::string sku_id;
    Month purchase_month;
    long long servers = 0;
    int lifetime_months = 60;

    bool operator==(const Cohort&) const = default;
};

struct Assignment {
    std::size_t cohort = 0;
    double share = 0;

    bool operator==(const Assignment&) const = default;
};

struct FleetState {
    Month month;
    std::vector<Cohort> cohorts;
    // Job key ("model" or "model/prefill", "model/decode") -> cohort shares.
    std::map<std::string, std::vector<Assignment>> assignments;
    std::vector<double> utilization;  // mean-of-day, per cohort
    double peak_demand_rps = 0;
    double mean_demand_rps = 0;

    long long total_servers() const;
    bool operator==(const FleetState&) const = default;
};

enum class EventKind { purchase, decommission, model_release, sku_available, capacity_exhausted };

struct Event {
    Month month;
    EventKind kind = EventKind::purchase;
    std::string subject;  // SKU or model id
    long long count = 0;

    bool operator==(const Event&) const = default;
};

struct YearTco {
    int year = 0;
    TcoBreakdown tco;

    bool operator==(const YearTco&) const = default;
};

enum class SimulationStatus { completed, capacity_exhausted };

struct SimulationResult {
    SimulationStatus status = SimulationStatus::completed;
    std::optional<Month> halted_at;
    std::vector<FleetState> fleet_timeline;
    std::vector<YearTco> annual_tco;
    Cents lifetime_tco = 0;
    std::vector<Event> event_log;

    bool operator==(const SimulationResult&) const = default;
};

struct SimulationOptions {
    bool record_timeline = true;
};

SimulationResult simulate(const Scenario& scenario, const RefreshPolicy& refresh, const OperationPolicy& op,
                          const SimulationOptions& options = {});
// Same, with the design replaced; used by build-stage searches.
SimulationResult simulate(const Scenario& scenario, const InfrastructureDesign& design,
                          const RefreshPolicy& refresh, const OperationPolicy& op,
                          const SimulationOptions& options = {});

// One month of fleet evolution. Exposed for tests and step-through tooling;
// `simulate` folds this over the horizon.
class Simulator {
public:
    Simulator(const Scenario& scenario, const RefreshPolicy& refresh, const OperationPolicy& op);
    ~Simulator();
    Simulator(const Simulator&) = delete;
    Simulator& operator=(const Simulator&) = delete;

    // Returns false once the horizon is exhausted or the run halted.
    bool step();
    void record_timeline(bool on);
    const FleetState& state() const;
    const std::vector<Event>& events() const;
    SimulationResult finish(bool keep_timeline);
    const ResolvedCatalog& catalog() const;

private:
    struct Impl;
    Impl* impl_;
};

// Per-job assignment for one month; exposed for tests.
struct Job {
    std::size_t model = 0;  // index into the resolved model list
    enum class Phase { full, prefill, decode } phase = Phase::full;
    double demand_rps = 0;
};

struct AssignmentInput {
    std::vector<Job> jobs;
    std::vector<long long> cohort_servers;
    // goodput[job][cohort]: per-server goodput, <= 0 when ineligible.
    std::vector<std::vector<double>> goodput;
    // Cohort preference order for each job, most preferred first.
    std::vector<std::vector<std::size_t>> preference;
};

struct AssignmentOutput {
    std::vector<std::vector<double>> servers_used;  // [job][cohort]
    std::vector<double> unmet_rps;                  // per job
    bool feasible() const;
};

AssignmentOutput assign_fleet(const AssignmentInput& input);

std::string_view to_string(PurchaseMode m);
std::string_view to_string(EventKind k);
std::string_view to_string(Job::Phase p);
PurchaseMode parse_purchase_mode(std::string_view text);

}  // namespace dclc
