#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "dclc/error.hpp"
#include "dclc/scenario_io.hpp"

namespace py = pybind11;
using namespace dclc;

namespace {

OperationPolicy ops_from(const std::vector<std::string>& names) {
    OperationPolicy op;
    for (const auto& name : names) {
        bool found = name == "all";
        if (found) op = OperationPolicy::all_enabled();
        for (int i = 0; i < OperationPolicy::kFlagCount; ++i)
            if (name == OperationPolicy::flag_names[i]) {
                op.set_flag(i, true);
                found = true;
            }
        if (!found) throw ValidationError("ops", "unknown operation '" + name + "'");
    }
    return op;
}

PolicyBundle bundle_from(const ScenarioDocument& doc, std::optional<int> lifetime,
                         const std::vector<std::string>& ops, const std::map<std::string, int>& generations) {
    PolicyBundle b = doc.policy;
    if (lifetime) b.refresh.default_lifetime_months = *lifetime;
    for (const auto& [g, life] : generations) b.refresh.lifetime_months_by_generation[g] = life;
    if (!ops.empty()) b.op = ops_from(ops);
    validate(b.refresh);
    return b;
}

py::dict breakdown(const TcoBreakdown& t) {
    py::dict d;
    const auto c = t.components();
    for (std::size_t i = 0; i < c.size(); ++i) d[py::str(std::string(TcoBreakdown::component_names[i]))] = to_usd(c[i]);
    d["total"] = to_usd(t.total);
    return d;
}

py::dict result_dict(const SimulationResult& r) {
    py::dict d;
    d["status"] = r.status == SimulationStatus::completed ? "completed" : "capacity_exhausted";
    d["halted_at"] = r.halted_at ? py::object(py::str(r.halted_at->str())) : py::object(py::none());
    d["lifetime_tco_usd"] = to_usd(r.lifetime_tco);
    py::list years;
    for (const auto& y : r.annual_tco) {
        py::dict e = breakdown(y.tco);
        e["year"] = y.year;
        years.append(e);
    }
    d["annual"] = years;
    py::list months, servers;
    for (const auto& f : r.fleet_timeline) {
        months.append(f.month.str());
        servers.append(f.total_servers());
    }
    d["months"] = months;
    d["servers"] = servers;
    py::list events;
    for (const auto& e : r.event_log)
        events.append(py::make_tuple(e.month.str(), std::string(to_string(e.kind)), e.subject, e.count));
    d["events"] = events;
    return d;
}

py::dict dist_dict(const TcoDistribution& t) {
    py::dict d;
    d["trials"] = t.trials;
    d["completed"] = t.completed;
    d["mean"] = t.mean;
    d["stddev"] = t.stddev;
    d["std_error"] = t.std_error();
    py::dict p;
    for (std::size_t i = 0; i < kPercentileLevels.size(); ++i) p[py::int_(kPercentileLevels[i])] = t.percentiles[i];
    d["percentiles"] = p;
    d["per_trial"] = t.per_trial;
    d["ratio_to_baseline"] = t.ratio_to_baseline;
    return d;
}

const HardwareSku& find_sku_or_throw(const ResolvedCatalog& c, const std::string& id) {
    for (const auto& h : c.skus)
        if (h.id == id) return h;
    throw ValidationError("sku", "unknown SKU '" + id + "'");
}

const ModelSpec& find_model_or_throw(const ResolvedCatalog& c, const std::string& id) {
    for (const auto& m : c.models)
        if (m.id == id) return m;
    throw ValidationError("model", "unknown model '" + id + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "datacenter lifecycle TCO simulator";
    m.attr("__version__") = kToolVersion;

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<ModelDoesNotFit>(m, "ModelDoesNotFit", base.ptr());
    py::register_exception<ModelUnservable>(m, "ModelUnservable", base.ptr());

    m.attr("OPERATIONS") = std::vector<std::string>(OperationPolicy::flag_names.begin(), OperationPolicy::flag_names.end());

    py::class_<ScenarioDocument>(m, "Scenario")
        .def_static("load", &load_scenario_document, py::arg("path"))
        .def_static(
            "parse",
            [](const std::string& text, const std::filesystem::path& base_dir) {
                return parse_scenario_document(text, "<string>", base_dir);
            },
            py::arg("text"), py::arg("base_dir") = ".")
        .def_property_readonly("start_month", [](const ScenarioDocument& d) { return d.scenario.start_month.str(); })
        .def_property(
            "horizon_months", [](const ScenarioDocument& d) { return d.scenario.demand.horizon_months; },
            [](ScenarioDocument& d, int v) {
                d.scenario.demand.horizon_months = v;
                d.distribution.base.demand.horizon_months = v;
            })
        .def_property_readonly("base_rps", [](const ScenarioDocument& d) { return d.scenario.demand.base_rps; })
        .def_property_readonly("annual_growth", [](const ScenarioDocument& d) { return d.scenario.demand.annual_growth; })
        .def_property_readonly("skus",
                               [](const ScenarioDocument& d) {
                                   std::vector<std::string> ids;
                                   for (const auto& h : resolve_catalog(d.scenario).skus) ids.push_back(h.id);
                                   return ids;
                               })
        .def_property_readonly("models",
                               [](const ScenarioDocument& d) {
                                   std::vector<std::string> ids;
                                   for (const auto& x : resolve_catalog(d.scenario).models) ids.push_back(x.id);
                                   return ids;
                               })
        .def("to_json", [](const ScenarioDocument& d) { return serialize_scenario(d.scenario); })
        .def(
            "simulate",
            [](const ScenarioDocument& d, std::optional<int> lifetime, const std::vector<std::string>& ops,
               const std::map<std::string, int>& generations) {
                const PolicyBundle b = bundle_from(d, lifetime, ops, generations);
                SimulationResult r;
                {
                    py::gil_scoped_release release;
                    r = simulate_bundle(d.scenario, b, {true});
                }
                return result_dict(r);
            },
            py::arg("lifetime_months") = py::none(), py::arg("ops") = std::vector<std::string>{},
            py::arg("generations") = std::map<std::string, int>{})
        .def(
            "monte_carlo",
            [](const ScenarioDocument& d, int trials, std::uint64_t seed, std::optional<int> lifetime,
               const std::vector<std::string>& ops, unsigned threads) {
                const PolicyBundle b = bundle_from(d, lifetime, ops, {});
                TcoDistribution t;
                {
                    py::gil_scoped_release release;
                    t = monte_carlo(d.distribution, b, trials, seed, {threads});
                }
                return dist_dict(t);
            },
            py::arg("trials") = 200, py::arg("seed") = 1, py::arg("lifetime_months") = py::none(),
            py::arg("ops") = std::vector<std::string>{}, py::arg("threads") = 0)
        .def(
            "latency",
            [](const ScenarioDocument& d, const std::string& model, const std::string& sku, int tp, double load) {
                const auto cat = resolve_catalog(d.scenario);
                const auto req = model_requirements(find_model_or_throw(cat, model), d.scenario.workload);
                const auto lat = roofline_latency(req, find_sku_or_throw(cat, sku), tp, load, d.scenario.perf);
                return lat ? py::object(py::make_tuple(lat->ttft_ms, lat->tbt_ms)) : py::object(py::none());
            },
            py::arg("model"), py::arg("sku"), py::arg("tensor_parallel"), py::arg("load_rps"))
        .def(
            "goodput",
            [](const ScenarioDocument& d, const std::string& model, const std::string& sku) {
                const auto cat = resolve_catalog(d.scenario);
                const auto g = max_goodput(find_model_or_throw(cat, model), d.scenario.workload,
                                           find_sku_or_throw(cat, sku), d.scenario.slo, d.scenario.perf);
                py::dict out;
                out["tensor_parallel"] = g.tensor_parallel;
                out["goodput_rps"] = g.goodput_rps;
                out["goodput_per_watt"] = g.goodput_per_watt;
                out["goodput_per_watt_per_dollar"] = g.goodput_per_watt_per_dollar;
                return out;
            },
            py::arg("model"), py::arg("sku"))
        .def(
            "snapshot",
            [](const ScenarioDocument& d, const std::string& sku, double utilization) {
                const auto cat = resolve_catalog(d.scenario);
                const auto s = facility_snapshot(d.scenario.design, find_sku_or_throw(cat, sku), utilization,
                                                 d.scenario.prices, d.scenario.schedule);
                py::dict out;
                out["servers"] = s.servers;
                out["stranded_watts"] = s.stranded_watts;
                out["facility_energy_mwh"] = s.facility_energy_mwh;
                out["tco"] = breakdown(s.tco);
                return out;
            },
            py::arg("sku"), py::arg("utilization") = 0.75);

    m.def(
        "amortize",
        [](double cost, double life, double year, const std::string& method) {
            return amortize(cost, life, year, parse_depreciation_method(method));
        },
        py::arg("cost"), py::arg("life_years"), py::arg("year"), py::arg("method") = "straight-line");
    m.def(
        "stranded_power",
        [](double budget, double tdp) {
            const auto s = stranded_power(budget, tdp);
            return py::make_tuple(s.servers, s.stranded_watts);
        },
        py::arg("budget_watts"), py::arg("tdp_watts"));
}
