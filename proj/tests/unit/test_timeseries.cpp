// Signal sources and CSV timeseries ingestion.

#include <sstream>

#include <catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace dobcbf;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

CsvTable parse(const std::string& text, std::vector<std::string> required = {"t", "v1", "phi"}) {
    std::istringstream in(text);
    return parse_timeseries_csv(in, required);
}

std::size_t error_line(const std::string& text) {
    try {
        parse(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

}  // namespace

TEST_CASE("constant and sinusoid sources", "[signal]") {
    const SignalSource c = ConstantSignal{3.5};
    CHECK(c(0.0) == 3.5);
    CHECK(c(1e6) == 3.5);
    CHECK(c.max_abs() == 3.5);
    const SignalSource s = SinusoidSignal{2.0, 0.5, 0.25};
    CHECK_THAT(s(3.0), WithinAbs(2.0 * std::sin(1.5 + 0.25), 1e-15));
    CHECK(s.max_abs() == 2.0);
    CHECK_THROWS_AS(SignalSource(SinusoidSignal{1.0, -1.0, 0.0}), InvalidArgument);
}

TEST_CASE("timeseries interpolates linearly and clamps at the ends", "[signal]") {
    const TimeseriesSignal ts({0.0, 1.0, 3.0}, {2.0, 4.0, -2.0});
    CHECK(ts(-5.0) == 2.0);
    CHECK(ts(0.0) == 2.0);
    CHECK(ts(0.25) == 2.5);
    CHECK(ts(1.0) == 4.0);
    CHECK(ts(2.0) == 1.0);
    CHECK(ts(3.0) == -2.0);
    CHECK(ts(10.0) == -2.0);
    CHECK(SignalSource(ts).max_abs() == 4.0);
    CHECK_THROWS_AS(TimeseriesSignal({0.0, 0.0}, {1.0, 2.0}), InvalidArgument);
    CHECK_THROWS_AS(TimeseriesSignal({0.0, 1.0}, {1.0}), InvalidArgument);
    CHECK_THROWS_AS(TimeseriesSignal({}, {}), InvalidArgument);
}

TEST_CASE("interpolation stays within neighbouring samples", "[signal][property]") {
    auto g = testsupport::rng(9);
    std::vector<double> t{0.0}, v{testsupport::uniform(g, -1, 1)};
    for (int i = 0; i < 200; ++i) {
        t.push_back(t.back() + testsupport::uniform(g, 0.01, 1.0));
        v.push_back(testsupport::uniform(g, -1, 1));
    }
    const TimeseriesSignal ts(t, v);
    for (int i = 0; i < 2000; ++i) {
        const double q = testsupport::uniform(g, 0, t.back());
        const auto k = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), q) - t.begin());
        const double lo = std::min(v[k - 1], v[std::min(k, v.size() - 1)]);
        const double hi = std::max(v[k - 1], v[std::min(k, v.size() - 1)]);
        CHECK(ts(q) >= lo - 1e-15);
        CHECK(ts(q) <= hi + 1e-15);
    }
}

TEST_CASE("CSV parsing accepts CRLF, BOM, blank lines and extra columns", "[csv]") {
    const auto table = parse("\xEF\xBB\xBFt,v1,phi,note\r\n0,20,0.01,1\r\n\r\n0.5, 19.5 ,-0.02,2\r\n");
    CHECK(table.header == std::vector<std::string>{"t", "v1", "phi", "note"});
    CHECK(table.column("t") == std::vector<double>{0.0, 0.5});
    CHECK(table.column("v1") == std::vector<double>{20.0, 19.5});
    CHECK(table.column("phi") == std::vector<double>{0.01, -0.02});
}

TEST_CASE("CSV errors carry line numbers", "[csv]") {
    CHECK(error_line("t,v1,phi\n0,20,0\n1,abc,0\n") == 3);
    CHECK(error_line("t,v1,phi\n0,20,0\n1,20\n") == 3);
    CHECK(error_line("t,v1,phi\n0,20,0\n\n0,20,0\n") == 4);
    CHECK(error_line("t,v1,phi\n0,20,nan\n") == 2);
    CHECK(error_line("t,v1\n0,20\n") == 1);
    CHECK(error_line("t,v1,phi,v1\n0,20,0,1\n") == 1);
    CHECK(error_line("t,v1,phi\n") == 1);
    CHECK_THROWS_WITH(parse(""), ContainsSubstring("header"));
    CHECK_THROWS_WITH(parse("t,v1,phi\n0,1,2x\n"), ContainsSubstring("line 2"));
}

TEST_CASE("loading a column from file with a scale", "[csv]") {
    const std::string path = DOBCBF_SOURCE_DIR "/data/example4_synthetic.csv";
    const auto rad = load_timeseries(path, "phi");
    const auto deg = load_timeseries(path, "phi", 180.0 / std::numbers::pi);
    CHECK_THAT(deg(390.05), WithinAbs(rad(390.05) * 180.0 / std::numbers::pi, 1e-12));
    CHECK_THROWS_AS(load_timeseries(path, "missing"), ParseError);
    CHECK_THROWS_AS(load_timeseries("/nonexistent.csv", "phi"), ParseError);
}

TEST_CASE("secant slope of a mapped timeseries", "[csv]") {
    const TimeseriesSignal ts({0.0, 1.0, 1.5, 4.0}, {0.0, 1.0, 0.0, 5.0});
    CHECK(max_secant_slope(ts, [](double x) { return x; }) == 2.0);
    CHECK(max_secant_slope(ts, [](double x) { return 3 * x; }) == 6.0);
}

TEST_CASE("bundled synthetic data stays within the disturbance-rate bound", "[csv]") {
    const TruckParams p;
    const auto table = read_timeseries_csv(DOBCBF_SOURCE_DIR "/data/example4_synthetic.csv", {"t", "v1", "phi"});
    const TimeseriesSignal phi(table.column("t"), table.column("phi"));
    const double slope = max_secant_slope(phi, [&](double x) { return p.T * grade_accel(x, p); });
    CHECK(slope <= 1.0758062437);
    CHECK(table.column("t").back() >= 600.0);
}
