#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "dclc/error.hpp"
#include "dclc/scenario_io.hpp"
#include "helpers.hpp"

using namespace dclc;
using nlohmann::json;

namespace {

std::string baseline_text() {
    std::ifstream in(testutil::data_dir() / "scenarios" / "baseline.json");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ScenarioDocument parse(const std::string& text) {
    return parse_scenario_document(text, "test.json", testutil::data_dir() / "scenarios");
}

json baseline_json() { return json::parse(baseline_text()); }

}  // namespace

TEST_CASE("baseline scenario loads with documented values") {
    const auto doc = testutil::baseline();
    const Scenario& s = doc.scenario;
    CHECK(s.demand.base_rps == 100000);
    CHECK(s.demand.annual_growth == 0.15);
    CHECK(s.demand.horizon_months == 180);
    CHECK(s.slo.ttft_ms_max == 400);
    CHECK(s.slo.tbt_ms_max == 100);
    CHECK(s.start_month == Month::of(2015, 1));
    CHECK_FALSE(s.model_seeds.empty());
    CHECK_FALSE(s.hardware_seeds.empty());
    CHECK(doc.policy.refresh == RefreshPolicy::baseline());
    CHECK(doc.policy.op == OperationPolicy{});
    CHECK_NOTHROW(validate(doc.distribution));
    CHECK(doc.distribution.demand_growth == Triangular{0.10, 0.15, 0.20});
    CHECK_FALSE(s.defaulted_fields.empty());
}

TEST_CASE("diurnal shape must average to one") {
    json j = baseline_json();
    j["demand"]["diurnal_shape"] = std::vector<double>(24, 1.2);
    CHECK_THROWS_AS(parse(j.dump()), ValidationError);
    j["demand"]["diurnal_shape"] = std::vector<double>(24, 1.0);
    CHECK(parse(j.dump()).scenario.demand.peak_factor() == 1.0);
    j["demand"]["diurnal_shape"] = std::vector<double>(23, 1.0);
    CHECK_THROWS_AS(parse(j.dump()), ValidationError);
}

TEST_CASE("unknown fields are rejected with a dotted path") {
    json j = baseline_json();
    j["demand"]["base_rsp"] = 5;
    try {
        parse(j.dump());
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "demand.base_rsp");
    }
    j = baseline_json();
    j["extra"] = true;
    CHECK_THROWS_AS(parse(j.dump()), ValidationError);
}

TEST_CASE("bad values are rejected") {
    for (auto mutate : std::vector<void (*)(json&)>{
             [](json& j) { j["schema_version"] = 2; },
             [](json& j) { j["start_month"] = "2015-13"; },
             [](json& j) { j["horizon_months"] = 0; },
             [](json& j) { j["slo"]["ttft_ms_max"] = -1; },
             [](json& j) { j["design"]["cooling"] = "immersion"; },
             [](json& j) { j["initial_fleet"][0]["sku"] = "nope"; },
             [](json& j) { j["initial_fleet"][0]["count"] = -3; },
             [](json& j) { j["perf"]["tp_selection"] = "largest"; },
             [](json& j) { j["uncertainty"]["energy_tariff"]["min"] = 50; },
             [](json& j) { j.erase("model_roadmap"); },
         }) {
        json j = baseline_json();
        mutate(j);
        CAPTURE(j.dump());
        CHECK_THROWS_AS(parse(j.dump()), ValidationError);
    }
}

TEST_CASE("malformed JSON reports a line number") {
    std::string text = baseline_text();
    text.insert(text.find("\"workload\""), "oops ");
    try {
        parse(text);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 6);
    }
}

TEST_CASE("catalog parsing") {
    const std::string header = "{\"schema_version\":1,\"kind\":\"hardware-catalog\"}\n";
    const std::string row =
        "{\"id\":\"x\",\"lineage\":\"l\",\"kind\":\"gpu-server\",\"release_month\":\"2020-01\",\"peak_flops\":1e15,"
        "\"mem_bandwidth\":3e12,\"mem_capacity\":6.4e11,\"tdp_server_watts\":10000,\"accelerators_per_server\":8,"
        "\"server_cost_usd\":300000,\"interconnect\":\"nvlink\"}\n";
    const auto skus = parse_hardware_catalog(header + row, "h.jsonl");
    REQUIRE(skus.size() == 1);
    CHECK(skus[0].id == "x");
    CHECK(skus[0].peak_flops == 1e15);
    try {
        parse_hardware_catalog(header + row + "{bad\n", "h.jsonl");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_hardware_catalog(row, "h.jsonl"), Error);
    CHECK_THROWS_AS(parse_model_catalog(header + row, "m.jsonl"), ParseError);
    CHECK_THROWS_AS(parse_hardware_catalog("", "h.jsonl"), ParseError);

    const auto shipped = load_model_catalog(testutil::data_dir() / "catalog" / "models.jsonl");
    CHECK_FALSE(shipped.empty());
    for (std::size_t i = 1; i < shipped.size(); ++i)
        if (shipped[i].lineage == shipped[i - 1].lineage) CHECK(shipped[i - 1].release_month <= shipped[i].release_month);
}

TEST_CASE("serialize then parse reproduces the scenario") {
    const auto doc = testutil::baseline();
    const std::string text = serialize_scenario(doc.scenario);
    const auto again = parse_scenario_document(text, "roundtrip.json", ".");
    CHECK(again.scenario == doc.scenario);
    CHECK(serialize_scenario(again.scenario) == text);

    PolicyBundle b = doc.policy;
    b.design = {PowerTopology::per_dc, CoolingDesign::liquid, NetworkDesign::hierarchical};
    b.refresh.lifetime_months_by_generation["h100"] = 36;
    b.refresh.purchase_mode = PurchaseMode::on_demand;
    b.op.quantization = true;
    b.op.hetero_scheduling = true;
    // The design half of a bundle lives in the scenario's own design block.
    json j = json::parse(text);
    const json pol = json::parse(serialize_policy(b));
    for (const char* k : {"power", "cooling", "network"}) j["design"][k] = pol["design"][k];
    j["policy"] = {{"refresh", pol["refresh"]}, {"operations", pol["operations"]}};
    const auto with_policy = parse_scenario_document(j.dump(), "roundtrip.json", ".");
    CHECK(with_policy.policy == b);
}

TEST_CASE("report tables") {
    Table t{"demo", {"name", "value"}, {false, true}, {{"a", "1.5"}, {"b,c", "2"}}};
    CHECK(render_csv(t) == "name,value\na,1.5\n\"b,c\",2\n");
    const json j = json::parse(render_json(t));
    REQUIRE(j.is_array());
    CHECK(j[0]["name"] == "a");
    CHECK(j[0]["value"] == 1.5);
    CHECK(j[1]["name"] == "b,c");
    CHECK(parse_report_format("csv") == ReportFormat::csv);
    CHECK_THROWS_AS(parse_report_format("xml"), ValidationError);
}

TEST_CASE("annual table re-sums to the lifetime total") {
    auto doc = testutil::baseline();
    doc.scenario.demand.horizon_months = 48;
    const auto r = simulate(doc.scenario, doc.policy.refresh, doc.policy.op);
    const Table annual = annual_tco_table(r, 1);
    REQUIRE(annual.columns == std::vector<std::string>{"seed", "year", "component", "usd"});
    double total = 0;
    std::map<std::string, double> parts;
    for (const auto& row : annual.rows) {
        if (row[2] == "total")
            total += std::stod(row[3]);
        else
            parts[row[1]] += std::stod(row[3]);
    }
    CHECK(total == doctest::Approx(to_usd(r.lifetime_tco)).epsilon(1e-12));
    CHECK(parts.size() == 4);
    double part_sum = 0;
    for (const auto& [year, v] : parts) part_sum += v;
    CHECK(part_sum == doctest::Approx(total).epsilon(1e-12));

    const Table timeline = fleet_timeline_table(r, 1);
    CHECK_FALSE(timeline.rows.empty());
    const Table events = events_table(r, 1);
    CHECK(events.rows.size() == r.event_log.size());
    CHECK(render_csv(annual) == render_csv(annual_tco_table(r, 1)));
}

TEST_CASE("write_table creates the output directory") {
    const auto dir = std::filesystem::temp_directory_path() / "dclc_unit_out";
    std::filesystem::remove_all(dir);
    Table t{"t", {"x"}, {true}, {{"1"}}};
    write_table(dir, t, ReportFormat::json);
    CHECK(std::filesystem::exists(dir / "t.json"));
    std::filesystem::remove_all(dir);
}
