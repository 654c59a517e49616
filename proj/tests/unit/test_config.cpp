// Scenario configs: parsing, validation, round trip and resolution.

#include <filesystem>

#include <catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace dobcbf;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

const std::filesystem::path kScenarios = DOBCBF_SOURCE_DIR "/scenarios";

std::string field_of(const Json& j) {
    try {
        parse_scenario(j, kScenarios);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "";
}

Json minimal() {
    return Json::parse(R"({"id": "t", "controller": {"kind": "dob", "alpha": 0.25, "sigma": 1.0}})");
}

}  // namespace

TEST_CASE("bundled scenarios parse and round-trip", "[config]") {
    std::size_t n = 0;
    for (const auto& entry : std::filesystem::directory_iterator(kScenarios)) {
        if (entry.path().extension() != ".json") continue;
        ++n;
        INFO(entry.path().string());
        const auto cfg = load_scenario(entry.path());
        const auto again = parse_scenario(to_json(cfg), kScenarios);
        CHECK(again == cfg);
        CHECK(to_json(again).dump() == to_json(cfg).dump());
        CHECK(config_hash(again) == config_hash(cfg));
        CHECK_NOTHROW(resolve(cfg));
    }
    CHECK(n == 10);
}

TEST_CASE("random configs round-trip", "[config][property]") {
    auto g = testsupport::rng(17);
    for (int i = 0; i < 200; ++i) {
        ScenarioConfig c;
        c.id = "r" + std::to_string(i);
        c.controller.alpha = testsupport::uniform(g, 0.01, 3);
        const double pick = testsupport::uniform(g, 0, 3);
        c.controller.sigma = pick < 1 ? NumberOrSymbol(testsupport::uniform(g, 0, 5))
                                      : NumberOrSymbol(std::string(pick < 2 ? "bh_over_kb" : "max_error"));
        if (pick > 1.5) c.controller.u_min = -testsupport::uniform(g, 1, 8);
        c.observer.k_b = testsupport::uniform(g, 0.01, 3);
        if (pick < 1.5) c.observer.initial_error = testsupport::uniform(g, -10, 10);
        else c.observer.b_hat0 = testsupport::uniform(g, -10, 10);
        c.grade.kind = "sinusoid";
        c.grade.amplitude = testsupport::uniform(g, 0, 15);
        c.grade.degrees = pick < 2;
        if (pick < 1) c.grade.omega = testsupport::uniform(g, 0, 1);
        else c.grade.omega_hz = testsupport::uniform(g, 0, 0.2);
        c.delay.tau = testsupport::uniform(g, 0, 2);
        c.initial_state.h0 = pick < 2.5 ? NumberOrSymbol(testsupport::uniform(g, 0, 20))
                                        : NumberOrSymbol(std::string("c0_threshold"));
        c.output.decimation = static_cast<std::size_t>(testsupport::uniform(g, 1, 500));
        const auto back = parse_scenario(to_json(c));
        CHECK(back == c);
    }
}

TEST_CASE("validation names the offending field", "[config]") {
    Json j = minimal();
    j["integrator"] = {{"step", 0.0}};
    CHECK(field_of(j) == "integrator.step");
    j = minimal();
    j["controller"]["alpha"] = -1.0;
    CHECK(field_of(j) == "controller.alpha");
    j = minimal();
    j["controller"]["kind"] = "pid";
    CHECK(field_of(j) == "controller.kind");
    j = minimal();
    j["controller"]["sigma"] = "big";
    CHECK(field_of(j) == "controller.sigma");
    j = minimal();
    j["controller"]["kind"] = "worst_case";
    CHECK(field_of(j) == "controller.p_bar");
    j = minimal();
    j["observer"] = {{"k_b", 0.0}};
    CHECK(field_of(j) == "observer.k_b");
    j = minimal();
    j["signals"] = {{"grade", {{"kind", "sinusoid"}, {"amplitude", 0.1}}}};
    CHECK(field_of(j) == "signals.grade.omega");
    j = minimal();
    j["signals"] = {{"grade", {{"kind", "sinusoid"}, {"amplitude", 0.1}, {"amplitude_deg", 3}, {"omega", 1}}}};
    CHECK(field_of(j) == "signals.grade.amplitude");
    j = minimal();
    j["delay"] = {{"tau", -0.5}};
    CHECK(field_of(j) == "delay.tau");
    j = minimal();
    j["initial_state"] = {{"D0", 50.0}, {"h0", 1.0}};
    CHECK(field_of(j) == "initial_state.h0");
    j = minimal();
    j["output"] = {{"decimation", 2.5}};
    CHECK(field_of(j) == "output.decimation");
    j = minimal();
    j["integrator"] = {{"stepp", 0.01}};
    CHECK(field_of(j) == "integrator.stepp");
    j = minimal();
    j["extra"] = 1;
    CHECK(field_of(j) == "extra");
    j = minimal();
    j["plant"] = {{"T", "two"}};
    CHECK(field_of(j) == "plant.T");
}

TEST_CASE("degree keys and symbolic values resolve", "[config]") {
    const auto rs = resolve(load_scenario(kScenarios / "example4.json"));
    CHECK_THAT(rs.b_h, WithinAbs(1.0758062437, 1e-15));
    CHECK(rs.sigma == 1.96);
    CHECK_THAT(rs.e0_abs, WithinAbs(5.0, 1e-12));
    REQUIRE(rs.c0_threshold);
    CHECK_THAT(*rs.c0_threshold, WithinAbs(10.14662882606061, 1e-9));
    CHECK_THAT(rs.h0, WithinAbs(10.14662882606061, 1e-9));
    CHECK_THAT(rs.D0, WithinAbs(5.0 + 2.0 * 20.0 + 10.14662882606061, 1e-9));
    CHECK(rs.setup.tau == 0.8);

    const auto c3 = resolve(load_scenario(kScenarios / "example3_case3.json"));
    CHECK_THAT(c3.b_h, WithinAbs(1.075806243708301, 1e-12));
    CHECK_THAT(c3.sigma, WithinAbs(0.9999128578011903, 1e-12));
    CHECK_THAT(c3.h0, WithinAbs(10.89730856302072, 1e-9));
    CHECK_THAT(c3.b_hat0 - c3.b0, WithinAbs(10.0, 1e-12));

    const auto c1 = resolve(load_scenario(kScenarios / "example3_case1.json"));
    CHECK_THAT(c1.sigma, WithinAbs(10.0, 1e-12));
    CHECK(c1.h0 == 0.0);

    const auto c4 = resolve(load_scenario(kScenarios / "example3_case4.json"));
    REQUIRE(c4.p_bar);
    CHECK_THAT(*c4.p_bar, WithinAbs(1.761454407254885, 1e-12));

    Json j = minimal();
    j["signals"] = {{"grade", {{"kind", "sinusoid"}, {"amplitude_deg", 10.0}, {"omega_hz", 0.05}}}};
    const auto rs2 = resolve(parse_scenario(j));
    const auto& sin = std::get<SinusoidSignal>(rs2.setup.disturbance.variant());
    CHECK_THAT(sin.amplitude, WithinAbs(deg_to_rad(10.0), 1e-15));
    CHECK_THAT(sin.omega, WithinAbs(0.1 * std::numbers::pi, 1e-15));
    CHECK_THAT(rs2.b_h, WithinAbs(1.075806243708301, 1e-12));
}

TEST_CASE("c0_threshold needs k_b above alpha", "[config]") {
    Json j = minimal();
    j["observer"] = {{"k_b", 0.2}};
    j["initial_state"] = {{"h0", "c0_threshold"}};
    const auto cfg = parse_scenario(j);
    try {
        resolve(cfg);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "initial_state.h0");
    }
}

TEST_CASE("timeseries paths resolve relative to the config", "[config]") {
    const auto cfg = load_scenario(kScenarios / "example4.json");
    const auto rs = resolve(cfg);
    CHECK(std::holds_alternative<TimeseriesSignal>(rs.setup.disturbance.variant()));
    CHECK(std::holds_alternative<TimeseriesSignal>(rs.setup.reference.variant()));
    ScenarioConfig moved = cfg;
    moved.base_dir = "/nonexistent";
    CHECK_THROWS_AS(resolve(moved), ConfigError);
}

TEST_CASE("config hash is stable and sensitive", "[config]") {
    const auto a = load_scenario(kScenarios / "example3_case1.json");
    auto b = a;
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    b.controller.alpha += 1e-9;
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("invalid JSON is a config error", "[config]") {
    const auto path = std::filesystem::temp_directory_path() / "dobcbf_bad.json";
    {
        std::ofstream out(path);
        out << "{ not json";
    }
    CHECK_THROWS_WITH(load_scenario(path), ContainsSubstring("invalid JSON"));
    CHECK_THROWS_AS(load_scenario("/nonexistent/x.json"), ConfigError);
    std::filesystem::remove(path);
}
