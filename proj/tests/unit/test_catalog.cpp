#include <doctest.h>

#include "dclc/catalog.hpp"
#include "dclc/error.hpp"
#include "helpers.hpp"

using namespace dclc;
using testutil::gpu;

namespace {

HardwareSku seed_at(const char* id, Month m, double flops) {
    HardwareSku h = gpu(id, flops, 1e12, 640e9);
    h.release_month = m;
    return h;
}

ModelSpec model_at(const char* id, Month m, double params) {
    ModelSpec s = testutil::dense(id, params);
    s.release_month = m;
    return s;
}

}  // namespace

TEST_CASE("available month is derived from release and delay") {
    HardwareSku h = gpu("x", 1e15, 1e12, 640e9);
    h.release_month = Month::of(2024, 3);
    h.availability_delay_months = 9;
    CHECK(h.available_month() == Month::of(2024, 12));
}

TEST_CASE("month formatting round-trips") {
    CHECK(Month::of(2015, 1).str() == "2015-01");
    CHECK(Month::parse("2024-12") == Month::of(2024, 12));
    CHECK_THROWS(Month::parse("2024-13"));
    CHECK_THROWS(Month::parse("2024/01"));
}

TEST_CASE("sku and model invariants are enforced") {
    HardwareSku h = gpu("x", 1e15, 1e12, 640e9);
    CHECK_NOTHROW(validate(h));
    h.peak_flops = 0;
    CHECK_THROWS_AS(validate(h), ValidationError);
    h = gpu("x", 1e15, 1e12, 640e9);
    h.availability_delay_months = -1;
    CHECK_THROWS_AS(validate(h), ValidationError);

    ModelSpec m = testutil::dense("m", 7e9);
    CHECK_NOTHROW(validate(m));
    m.active_params = 3e9;  // dense must be fully active
    CHECK_THROWS_AS(validate(m), ValidationError);
    m.architecture = Architecture::moe;
    CHECK_NOTHROW(validate(m));
    m.active_params = 8e9;
    CHECK_THROWS_AS(validate(m), ValidationError);

    ModelSpec s = testutil::dense("s", 7e9);
    s.kv_bytes_per_token = 0;
    CHECK_THROWS_AS(validate(s), ValidationError);
    s.architecture = Architecture::ssm;
    s.state_bytes = 1e6;
    CHECK_NOTHROW(validate(s));
}

TEST_CASE("hardware projection: two-point linear fit") {
    const std::vector<HardwareSku> seeds = {seed_at("a", Month::of(2020, 1), 100),
                                            seed_at("b", Month::of(2022, 1), 200)};
    const auto out = project_hardware_roadmap(seeds, Month::of(2024, 1), {GrowthShape::medium_linear, 1.0});
    REQUIRE(out.size() == 3);
    CHECK(out[2].synthetic);
    CHECK(out[2].release_month == Month::of(2024, 1));
    CHECK(out[2].peak_flops == doctest::Approx(300));
    CHECK(out[2].availability_delay_months == 9);
}

TEST_CASE("hardware projection: horizon at the last seed leaves the input unchanged") {
    const std::vector<HardwareSku> seeds = {seed_at("a", Month::of(2020, 1), 100),
                                            seed_at("b", Month::of(2022, 1), 200)};
    const auto out = project_hardware_roadmap(seeds, Month::of(2022, 1), {});
    CHECK(out == seeds);
}

TEST_CASE("hardware projection: shipped seeds reach 2030 at a yearly-ish cadence") {
    const auto skus = load_hardware_catalog(testutil::data_dir() / "catalog" / "hardware.jsonl");
    const auto out = project_hardware_roadmap(skus, Month::of(2030, 1), {});
    std::vector<Month> nvidia;
    for (const auto& s : out)
        if (s.lineage == "nvidia") nvidia.push_back(s.release_month);
    REQUIRE(nvidia.size() > 6);
    int synthetic = 0;
    for (const auto& s : out) synthetic += s.synthetic && s.lineage == "nvidia";
    CHECK(synthetic >= 3);
    // Shipped history is irregular; only the projected tail follows the cadence.
    for (std::size_t i = nvidia.size() - synthetic; i < nvidia.size(); ++i) {
        const int gap = nvidia[i] - nvidia[i - 1];
        CHECK(gap >= 6);
        CHECK(gap <= 24);
    }
}

TEST_CASE("hardware projection rejects bad input") {
    const std::vector<HardwareSku> none;
    CHECK_THROWS_AS(project_hardware_roadmap(none, Month::of(2030, 1), {}), ValidationError);
    const std::vector<HardwareSku> seeds = {seed_at("a", Month::of(2020, 1), 100),
                                            seed_at("b", Month::of(2022, 1), 200)};
    CHECK_THROWS_AS(project_hardware_roadmap(seeds, Month::of(2021, 1), {}), ValidationError);
    const std::vector<HardwareSku> backwards = {seeds[1], seeds[0]};
    CHECK_THROWS_AS(project_hardware_roadmap(backwards, Month::of(2030, 1), {}), ValidationError);
    // A steep decline drives extrapolated values negative.
    std::vector<HardwareSku> falling = seeds;
    falling[0].server_cost_usd = 900000;
    falling[1].server_cost_usd = 100000;
    CHECK_THROWS_AS(project_hardware_roadmap(falling, Month::of(2030, 1), {GrowthShape::medium_linear, 1.0}),
                    ValidationError);
    CHECK_NOTHROW(project_hardware_roadmap(falling, Month::of(2030, 1), {GrowthShape::medium_linear, 1.0, true}));
}

TEST_CASE("model projection: exponential fit doubles every cadence") {
    const std::vector<ModelSpec> seeds = {model_at("a", Month::of(2022, 1), 100e9),
                                          model_at("b", Month::of(2024, 1), 200e9)};
    const auto out = project_model_roadmap(seeds, Month::of(2026, 1), {GrowthShape::fast_exponential, 1.0});
    REQUIRE(out.size() == 3);
    CHECK(out[2].total_params == doctest::Approx(400e9).epsilon(1e-9));
    CHECK(out[2].active_params == out[2].total_params);
}

TEST_CASE("model projection: linear growth past the last seed") {
    const auto models = load_model_catalog(testutil::data_dir() / "catalog" / "models.jsonl");
    const auto out = project_model_roadmap(models, Month::of(2030, 12), {});
    double prev = 0;
    std::vector<double> deltas;
    for (const auto& m : out) {
        if (m.lineage != "flagship") continue;
        if (m.synthetic) {
            CHECK(m.total_params > prev);
            deltas.push_back(m.total_params - prev);
        }
        prev = m.total_params;
    }
    REQUIRE(deltas.size() >= 2);
    for (std::size_t i = 2; i < deltas.size(); ++i) CHECK(deltas[i] == doctest::Approx(deltas[1]).epsilon(1e-6));
}

TEST_CASE("model projection keeps moe sparsity") {
    std::vector<ModelSpec> seeds = {model_at("a", Month::of(2022, 1), 100e9), model_at("b", Month::of(2024, 1), 200e9)};
    for (auto& s : seeds) {
        s.architecture = Architecture::moe;
        s.active_params = s.total_params / 4;
    }
    const auto out = project_model_roadmap(seeds, Month::of(2026, 1), {});
    REQUIRE(out.size() == 3);
    CHECK(out[2].active_params == doctest::Approx(out[2].total_params / 4));
}

TEST_CASE("projection properties over random regimes") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> rate(0.1, 3.0);
    const auto skus = load_hardware_catalog(testutil::data_dir() / "catalog" / "hardware.jsonl");
    const auto models = load_model_catalog(testutil::data_dir() / "catalog" / "models.jsonl");
    for (int i = 0; i < 60; ++i) {
        const GrowthRegime r{static_cast<GrowthShape>(i % 3), rate(rng), i % 2 == 0};
        const auto a = project_hardware_roadmap(skus, Month::of(2032, 1), r);
        CHECK(a == project_hardware_roadmap(skus, Month::of(2032, 1), r));  // deterministic

        // Truncation idempotence.
        const auto b = project_hardware_roadmap(skus, Month::of(2028, 6), r);
        std::vector<HardwareSku> cut;
        for (const auto& s : a)
            if (s.release_month <= Month::of(2028, 6)) cut.push_back(s);
        CHECK(cut == b);

        // Monotone flops within a lineage.
        std::map<std::string, double> last;
        for (const auto& s : a) {
            if (s.synthetic) CHECK(s.peak_flops >= last[s.lineage]);
            last[s.lineage] = s.peak_flops;
        }
        const auto m = project_model_roadmap(models, Month::of(2032, 1), r);
        std::map<std::string, double> lastp;
        for (const auto& s : m) {
            if (s.synthetic) CHECK(s.total_params >= lastp[s.lineage]);
            lastp[s.lineage] = s.total_params;
        }
    }
}
