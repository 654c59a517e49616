#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "errors.hpp"

namespace dobcbf {

struct ConstantSignal {
    double value = 0.0;
};

/// amplitude * sin(omega t + phase)
struct SinusoidSignal {
    double amplitude = 0.0;
    double omega = 0.0;
    double phase = 0.0;
};

/// Linear interpolation between samples, clamped to the end values outside
/// [t.front(), t.back()].
class TimeseriesSignal {
public:
    TimeseriesSignal(std::vector<double> t, std::vector<double> values)
        : t_(std::move(t)), values_(std::move(values)) {
        if (t_.empty()) throw InvalidArgument("timeseries: no samples");
        if (t_.size() != values_.size()) throw InvalidArgument("timeseries: length mismatch");
        for (std::size_t i = 1; i < t_.size(); ++i)
            if (!(t_[i] > t_[i - 1])) throw InvalidArgument("timeseries: t not strictly increasing");
    }

    double operator()(double t) const {
        if (t <= t_.front()) return values_.front();
        if (t >= t_.back()) return values_.back();
        const auto it = std::upper_bound(t_.begin(), t_.end(), t);
        const std::size_t i = static_cast<std::size_t>(it - t_.begin());
        const double w = (t - t_[i - 1]) / (t_[i] - t_[i - 1]);
        return values_[i - 1] + w * (values_[i] - values_[i - 1]);
    }

    const std::vector<double>& times() const { return t_; }
    const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> t_;
    std::vector<double> values_;
};

class SignalSource {
public:
    using Variant = std::variant<ConstantSignal, SinusoidSignal, TimeseriesSignal>;

    SignalSource() : v_(ConstantSignal{}) {}
    SignalSource(ConstantSignal s) : v_(s) {}
    SignalSource(SinusoidSignal s) : v_(s) {
        if (!(s.omega >= 0)) throw InvalidArgument("sinusoid: omega must be >= 0");
    }
    SignalSource(TimeseriesSignal s) : v_(std::move(s)) {}

    double operator()(double t) const {
        return std::visit(
            [t](const auto& s) -> double {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, ConstantSignal>) {
                    return s.value;
                } else if constexpr (std::is_same_v<S, SinusoidSignal>) {
                    return s.amplitude * std::sin(s.omega * t + s.phase);
                } else {
                    return s(t);
                }
            },
            v_);
    }

    /// sup |value| over t >= 0.
    double max_abs() const {
        return std::visit(
            [](const auto& s) -> double {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, ConstantSignal>) {
                    return std::abs(s.value);
                } else if constexpr (std::is_same_v<S, SinusoidSignal>) {
                    return std::abs(s.amplitude);
                } else {
                    double m = 0.0;
                    for (double v : s.values()) m = std::max(m, std::abs(v));
                    return m;
                }
            },
            v_);
    }

    const Variant& variant() const { return v_; }

private:
    Variant v_;
};

// ---------------------------------------------------------------------------
// CSV ingestion

struct CsvTable {
    std::vector<std::string> header;
    std::map<std::string, std::vector<double>, std::less<>> columns;

    const std::vector<double>& column(std::string_view name) const {
        auto it = columns.find(name);
        if (it == columns.end()) throw ParseError("missing column '" + std::string(name) + "'", 1);
        return it->second;
    }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace detail

/// Parse a header-first numeric CSV. LF or CRLF line endings; blank lines
/// are skipped. Every column named in `required` must be present, and `t`
/// must be strictly increasing.
inline CsvTable parse_timeseries_csv(std::istream& in, const std::vector<std::string>& required) {
    CsvTable table;
    std::string line;
    std::size_t lineno = 0;

    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv = detail::trim(line);
        if (lineno == 1 && sv.substr(0, 3) == "\xEF\xBB\xBF") sv.remove_prefix(3);
        if (sv.empty()) continue;
        for (auto name : detail::split_commas(sv)) table.header.emplace_back(name);
        break;
    }
    if (table.header.empty()) throw ParseError("empty file, header row expected", lineno);
    for (const auto& h : table.header) {
        if (h.empty()) throw ParseError("empty column name in header", lineno);
        if (!table.columns.emplace(h, std::vector<double>{}).second)
            throw ParseError("duplicate column '" + h + "'", lineno);
    }
    for (const auto& r : required)
        if (!table.columns.count(r)) throw ParseError("missing column '" + r + "'", lineno);

    std::vector<std::vector<double>*> slots;
    for (const auto& h : table.header) slots.push_back(&table.columns[h]);

    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view sv = detail::trim(line);
        if (sv.empty()) continue;
        const auto fields = detail::split_commas(sv);
        if (fields.size() != slots.size())
            throw ParseError("expected " + std::to_string(slots.size()) + " fields, got " +
                                 std::to_string(fields.size()),
                             lineno);
        for (std::size_t i = 0; i < fields.size(); ++i) {
            double v = 0.0;
            const auto f = fields[i];
            const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
            if (res.ec != std::errc{} || res.ptr != f.data() + f.size() || !std::isfinite(v))
                throw ParseError("bad number '" + std::string(f) + "' in column '" +
                                     table.header[i] + "'",
                                 lineno);
            slots[i]->push_back(v);
        }
        if (auto it = table.columns.find("t"); it != table.columns.end()) {
            const auto& t = it->second;
            if (t.size() >= 2 && !(t.back() > t[t.size() - 2]))
                throw ParseError("time column not strictly increasing", lineno);
        }
    }
    if (table.columns.begin()->second.empty()) throw ParseError("no data rows", lineno);
    return table;
}

inline CsvTable read_timeseries_csv(const std::string& path,
                                    const std::vector<std::string>& required) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return parse_timeseries_csv(in, required);
}

/// Timeseries source for one column of a `t,...` CSV, multiplied by `scale`
/// (e.g. degrees to radians).
inline SignalSource load_timeseries(const std::string& path, const std::string& column,
                                    double scale = 1.0) {
    const CsvTable table = read_timeseries_csv(path, {"t", column});
    std::vector<double> values = table.column(column);
    for (double& v : values) v *= scale;
    return TimeseriesSignal(table.column("t"), std::move(values));
}

/// Largest finite-difference slope of t -> fn(x(t)) over the samples.
template <typename Fn>
double max_secant_slope(const TimeseriesSignal& s, Fn&& fn) {
    const auto& t = s.times();
    const auto& x = s.values();
    double m = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i)
        m = std::max(m, std::abs(fn(x[i]) - fn(x[i - 1])) / (t[i] - t[i - 1]));
    return m;
}

}  // namespace dobcbf
