// dclc: lifecycle TCO simulator and policy search.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "dclc/error.hpp"
#include "dclc/scenario_io.hpp"

#ifndef DCLC_DATA_DIR
#define DCLC_DATA_DIR "data"
#endif

namespace fs = std::filesystem;
using namespace dclc;

namespace {

enum Exit { ok = 0, usage = 1, invalid = 2, exhausted = 3 };

struct Globals {
    std::string scenario;
    std::optional<std::uint64_t> seed;
    int trials = 200;
    std::string out = "out";
    std::string format = "csv";
    unsigned threads = 0;
    std::string objective = "mean";
};

// Bare names resolve against the shipped scenario directory.
fs::path resolve_scenario(const std::string& s) {
    fs::path p(s);
    if (fs::exists(p)) return p;
    if (!p.has_extension() && !p.has_parent_path()) {
        for (const char* dir : std::initializer_list<const char*>{std::getenv("DCLC_DATA_DIR"), DCLC_DATA_DIR}) {
            if (!dir) continue;
            fs::path q = fs::path(dir) / "scenarios" / (s + ".json");
            if (fs::exists(q)) return q;
        }
    }
    throw ValidationError("--scenario", "no such file '" + s + "'");
}

std::uint64_t resolve_seed(const Globals& g) {
    if (g.seed) return *g.seed;
    if (const char* env = std::getenv("DCLC_SEED")) {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(env, &used);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw ValidationError("DCLC_SEED", "expected a non-negative integer");
    }
    return 1;
}

void write_tables(const Globals& g, std::initializer_list<Table> tables) {
    const ReportFormat f = parse_report_format(g.format);
    for (const auto& t : tables) write_table(g.out, t, f);
}

Objective parse_objective(const std::string& s) {
    if (s == "mean") return Objective::mean;
    if (s == "p95") return Objective::p95;
    throw ValidationError("--objective", "expected mean or p95");
}

OptimizeOptions optimize_options(const Globals& g, std::uint64_t seed) {
    OptimizeOptions o;
    o.objective = parse_objective(g.objective);
    o.trials = g.trials;
    o.seed = seed;
    o.threads = g.threads;
    if (o.trials < 1) throw ValidationError("--trials", "must be >= 1");
    return o;
}

void write_search(const Globals& g, const std::string& cmd, const fs::path& scenario, std::uint64_t seed,
                  const OptimizeResult& r, Objective objective) {
    write_tables(g, {candidates_table(r.candidates, seed), distribution_table(r.candidates, seed),
                     per_trial_table(r.candidates, seed)});
    write_text(fs::path(g.out) / "summary.json", optimize_summary(r, objective, seed));
    write_text(fs::path(g.out) / "run_metadata.json", run_metadata(cmd, seed, g.trials, scenario.string()));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AI datacenter lifecycle TCO simulator"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--scenario", g.scenario, "scenario file, or the name of a shipped scenario");
    app.add_option("--seed", g.seed, "master seed (falls back to $DCLC_SEED, then 1)");
    app.add_option("--trials", g.trials, "Monte Carlo trials per candidate");
    app.add_option("--out", g.out, "output directory");
    app.add_option("--format", g.format, "table format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", g.threads, "worker threads; 0 uses every core");

    auto* sim = app.add_subcommand("simulate", "run one scenario under one policy bundle");
    int lifetime = -1;
    std::vector<std::string> ops;
    std::string purchase_mode;
    bool sample = false;
    sim->add_option("--lifetime", lifetime, "default server lifetime in months");
    sim->add_option("--ops", ops, "operation flags to enable")->delimiter(',');
    sim->add_option("--purchase-mode", purchase_mode)->check(CLI::IsMember({"on-availability", "on-demand"}));
    sim->add_flag("--sample", sample, "simulate the scenario drawn for --seed instead of the nominal one");

    auto* sweep = app.add_subcommand("sweep", "evaluate one stage's candidate policies");
    std::string stage = "refresh";
    sweep->add_option("--stage", stage)->check(CLI::IsMember({"refresh", "build", "operation"}));
    sweep->add_option("--objective", g.objective)->check(CLI::IsMember({"mean", "p95"}));

    auto* opt = app.add_subcommand("optimize", "cross-stage search for the best policy bundle");
    opt->add_option("--objective", g.objective)->check(CLI::IsMember({"mean", "p95"}));
    int top_k = 2;
    opt->add_option("--top-k", top_k, "candidates kept per stage");

    auto* matrix = app.add_subcommand("matrix", "best policy per model/hardware growth regime");
    matrix->add_option("--objective", g.objective)->check(CLI::IsMember({"mean", "p95"}));
    matrix->add_option("--top-k", top_k, "candidates kept per stage");

    auto* snap = app.add_subcommand("snapshot", "one year of a facility filled with a single SKU");
    std::string snap_sku;
    double utilization = 0.75;
    snap->add_option("--sku", snap_sku, "catalog SKU id")->required();
    snap->add_option("--utilization", utilization, "average power utilization");

    auto* val = app.add_subcommand("validate", "check a scenario file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage;
    }

    try {
        if (g.scenario.empty()) throw CLI::RequiredError("--scenario");
        const fs::path path = resolve_scenario(g.scenario);
        const ScenarioDocument doc = load_scenario_document(path);
        const std::uint64_t seed = resolve_seed(g);

        if (*val) {
            std::cout << path.string() << ": ok";
            if (!doc.scenario.defaulted_fields.empty())
                std::cout << " (" << doc.scenario.defaulted_fields.size() << " fields defaulted)";
            std::cout << "\n";
            return ok;
        }
        if (*sim) {
            PolicyBundle b = doc.policy;
            if (lifetime >= 0) b.refresh.default_lifetime_months = lifetime;
            if (!purchase_mode.empty()) b.refresh.purchase_mode = parse_purchase_mode(purchase_mode);
            for (const auto& name : ops) {
                bool found = false;
                for (int i = 0; i < OperationPolicy::kFlagCount; ++i)
                    if (name == OperationPolicy::flag_names[i]) {
                        b.op.set_flag(i, true);
                        found = true;
                    }
                if (name == "all") b.op = OperationPolicy::all_enabled(), found = true;
                if (!found) throw ValidationError("--ops", "unknown operation '" + name + "'");
            }
            validate(b.refresh);
            const Scenario s = sample ? sample_scenario(doc.distribution, trial_seed(seed, 0)) : doc.scenario;
            const SimulationResult r = simulate_bundle(s, b, {true});
            write_tables(g, {fleet_timeline_table(r, seed), fleet_totals_table(r, seed), annual_tco_table(r, seed),
                             events_table(r, seed)});
            write_text(fs::path(g.out) / "summary.json", simulation_summary(r, b, seed));
            write_text(fs::path(g.out) / "run_metadata.json", run_metadata("simulate", seed, 1, path.string()));
            std::cout << "lifetime TCO " << format_cents(r.lifetime_tco) << " USD\n";
            if (r.status != SimulationStatus::completed) {
                std::cerr << "capacity exhausted at " << r.halted_at->str() << "\n";
                return exhausted;
            }
            return ok;
        }
        if (*snap) {
            const ResolvedCatalog cat = resolve_catalog(doc.scenario);
            const HardwareSku* sku = nullptr;
            for (const auto& h : cat.skus)
                if (h.id == snap_sku) sku = &h;
            if (!sku) throw ValidationError("--sku", "unknown SKU '" + snap_sku + "'");
            const FacilitySnapshot f =
                facility_snapshot(doc.scenario.design, *sku, utilization, doc.scenario.prices, doc.scenario.schedule);
            write_tables(g, {snapshot_table(f, sku->id)});
            write_text(fs::path(g.out) / "run_metadata.json", run_metadata("snapshot", seed, 1, path.string()));
            std::cout << f.servers << " servers, " << format_fixed(f.facility_energy_mwh / 1e3, 1) << " GWh/yr, "
                      << format_cents(f.tco.total) << " USD/yr\n";
            return ok;
        }
        const OptimizeOptions o = optimize_options(g, seed);
        if (*sweep) {
            OptimizeResult r;
            if (stage == "refresh")
                r = optimize(doc.distribution, refresh_space(doc.scenario, doc.policy), o);
            else if (stage == "build")
                r = optimize(doc.distribution, build_space(doc.policy), o);
            else
                r = optimize_operations(doc.distribution, doc.policy, o);
            write_search(g, "sweep " + stage, path, seed, r, o.objective);
            std::cout << "best " << r.best.label() << " ratio " << format_fixed(r.baseline_ratio, 3) << "\n";
            return ok;
        }
        if (*opt) {
            const CrossStageResult r = optimize_cross_stage(doc.distribution, doc.policy, o, top_k);
            write_search(g, "optimize", path, seed, r.combined, o.objective);
            std::cout << "best " << r.combined.best.label() << " ratio " << format_fixed(r.combined.baseline_ratio, 3)
                      << "\n";
            return ok;
        }
        if (*matrix) {
            const auto cells = regime_matrix(doc.distribution, doc.policy, o, top_k);
            write_tables(g, {regime_matrix_table(cells, seed)});
            write_text(fs::path(g.out) / "run_metadata.json", run_metadata("matrix", seed, g.trials, path.string()));
            for (const auto& c : cells)
                std::cout << regime_name(c.model_regime) << "/" << regime_name(c.hardware_regime) << " "
                          << format_fixed(c.baseline_ratio, 3) << "\n";
            return ok;
        }
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return invalid;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return invalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return invalid;
    }
    return usage;
}
