#pragma once

// JSON scenario configs for the truck: parsing with field-level validation,
// lossless serialization, and resolution of symbolic entries ("auto",
// "c0_threshold", ...) into a runnable SimulationSetup.
//
// Units: SI; angles in radians unless the key carries a `_deg` suffix.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>

#include "json.hpp"

#include "errors.hpp"
#include "observer.hpp"
#include "safety_controller.hpp"
#include "signal_source.hpp"
#include "simulator.hpp"
#include "vehicle_model.hpp"

namespace dobcbf {

using Json = nlohmann::ordered_json;

/// A number or a named expression such as "auto".
using NumberOrSymbol = std::variant<double, std::string>;

struct SignalSpec {
    std::string kind = "constant";  // constant | sinusoid | timeseries
    double value = 0.0;
    double amplitude = 0.0;
    std::optional<double> omega;     // rad/s
    std::optional<double> omega_hz;  // cycles/s, alternative to omega
    double phase = 0.0;
    std::string path;
    std::string column;
    bool degrees = false;  // value/amplitude/column in degrees

    bool operator==(const SignalSpec&) const = default;
};

struct ScenarioConfig {
    std::string id = "scenario";
    std::string description;
    TruckParams plant;

    struct Controller {
        std::string kind = "dob";
        double alpha = 0.25;
        NumberOrSymbol sigma = 0.0;              // number | "bh_over_kb" | "max_error"
        std::optional<NumberOrSymbol> p_bar;     // number | "auto"
        std::optional<double> u_min;
        std::optional<double> u_max;
        bool operator==(const Controller&) const = default;
    } controller;

    struct Observer {
        double k_b = 0.55;
        NumberOrSymbol b_h = std::string("auto");     // number | "auto"
        NumberOrSymbol e0_abs = std::string("auto");  // number | "auto"
        double b_hat0 = 0.0;
        std::optional<double> initial_error;  // sets b_hat0 = b(0) - initial_error
        bool operator==(const Observer&) const = default;
    } observer;

    SignalSpec grade;
    SignalSpec lead_speed = [] {
        SignalSpec s;
        s.value = 20.0;
        return s;
    }();

    struct Delay {
        double tau = 0.0;
        std::string prehistory = "controller";  // controller | zero
        bool operator==(const Delay&) const = default;
    } delay;

    struct Integrator {
        double step = 1e-3;
        double duration = 120.0;
        double eps_int = 1e-3;
        bool operator==(const Integrator&) const = default;
    } integrator;

    struct Initial {
        std::optional<double> D0;
        std::optional<double> v0;
        std::optional<NumberOrSymbol> h0;  // number | "c0_threshold"
        bool operator==(const Initial&) const = default;
    } initial_state;

    struct Output {
        std::size_t decimation = 100;
        bool operator==(const Output&) const = default;
    } output;

    std::filesystem::path base_dir;  // relative data paths resolve here; not serialized

    bool operator==(const ScenarioConfig& o) const {
        return id == o.id && description == o.description && plant_equal(o) &&
               controller == o.controller && observer == o.observer && grade == o.grade &&
               lead_speed == o.lead_speed && delay == o.delay && integrator == o.integrator &&
               initial_state == o.initial_state && output == o.output;
    }

private:
    bool plant_equal(const ScenarioConfig& o) const {
        const auto& a = plant;
        const auto& b = o.plant;
        return a.grav == b.grav && a.gamma == b.gamma && a.c == b.c && a.D_sf == b.D_sf &&
               a.T == b.T && a.v_star == b.v_star;
    }
};

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

class Reader {
public:
    Reader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "must be an object");
    }

    /// Rejects keys that were never read.
    void done() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw ConfigError(field(it.key()), "unknown key");
    }

    std::string field(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    std::optional<double> number(const std::string& key) {
        seen_.insert(key);
        if (!j_.contains(key) || j_[key].is_null()) return std::nullopt;
        if (!j_[key].is_number()) throw ConfigError(field(key), "must be a number");
        const double v = j_[key].get<double>();
        if (!std::isfinite(v)) throw ConfigError(field(key), "must be finite");
        return v;
    }

    double number(const std::string& key, double fallback) {
        return number(key).value_or(fallback);
    }

    std::optional<std::string> string(const std::string& key) {
        seen_.insert(key);
        if (!j_.contains(key) || j_[key].is_null()) return std::nullopt;
        if (!j_[key].is_string()) throw ConfigError(field(key), "must be a string");
        return j_[key].get<std::string>();
    }

    std::optional<bool> boolean(const std::string& key) {
        seen_.insert(key);
        if (!j_.contains(key) || j_[key].is_null()) return std::nullopt;
        if (!j_[key].is_boolean()) throw ConfigError(field(key), "must be a boolean");
        return j_[key].get<bool>();
    }

    std::optional<NumberOrSymbol> number_or_symbol(const std::string& key,
                                                   std::initializer_list<const char*> symbols) {
        seen_.insert(key);
        if (!j_.contains(key) || j_[key].is_null()) return std::nullopt;
        const Json& v = j_[key];
        if (v.is_number()) return v.get<double>();
        if (v.is_string()) {
            const std::string s = v.get<std::string>();
            for (const char* sym : symbols)
                if (s == sym) return s;
            std::string allowed;
            for (const char* sym : symbols) allowed += std::string(allowed.empty() ? "" : ", ") + sym;
            throw ConfigError(field(key), "unknown symbol '" + s + "' (allowed: " + allowed + ")");
        }
        throw ConfigError(field(key), "must be a number or string");
    }

    std::optional<Reader> object(const std::string& key) {
        seen_.insert(key);
        if (!j_.contains(key) || j_[key].is_null()) return std::nullopt;
        return std::optional<Reader>(std::in_place, j_[key], field(key));
    }

private:
    const Json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

inline SignalSpec parse_signal(Reader& r, bool angle) {
    SignalSpec s;
    s.kind = r.string("kind").value_or("constant");
    if (s.kind != "constant" && s.kind != "sinusoid" && s.kind != "timeseries")
        throw ConfigError(r.field("kind"), "must be constant, sinusoid or timeseries");

    auto angle_value = [&](const std::string& key) -> std::optional<double> {
        const auto rad = r.number(key);
        std::optional<double> deg;
        if (angle) deg = r.number(key + "_deg");
        if (rad && deg) throw ConfigError(r.field(key), "give either " + key + " or " + key + "_deg");
        if (deg) {
            s.degrees = true;
            return deg;
        }
        return rad;
    };

    if (s.kind == "constant") {
        s.value = angle_value("value").value_or(0.0);
    } else if (s.kind == "sinusoid") {
        s.amplitude = angle_value("amplitude").value_or(0.0);
        s.omega = r.number("omega");
        s.omega_hz = r.number("omega_hz");
        if (s.omega && s.omega_hz) throw ConfigError(r.field("omega"), "give either omega or omega_hz");
        if (!s.omega && !s.omega_hz) throw ConfigError(r.field("omega"), "required for sinusoid");
        const double w = s.omega ? *s.omega : *s.omega_hz;
        if (w < 0) throw ConfigError(r.field(s.omega ? "omega" : "omega_hz"), "must be >= 0");
        s.phase = r.number("phase", 0.0);
    } else {
        const auto path = r.string("path");
        if (!path || path->empty()) throw ConfigError(r.field("path"), "required for timeseries");
        s.path = *path;
        const auto col = r.string("column");
        if (!col || col->empty()) throw ConfigError(r.field("column"), "required for timeseries");
        s.column = *col;
        if (angle) s.degrees = r.boolean("degrees").value_or(false);
    }
    r.done();
    return s;
}

}  // namespace detail

inline ScenarioConfig parse_scenario(const Json& j, std::filesystem::path base_dir = {}) {
    ScenarioConfig cfg;
    cfg.base_dir = std::move(base_dir);
    detail::Reader root(j, "");
    cfg.id = root.string("id").value_or("scenario");
    if (cfg.id.empty()) throw ConfigError("id", "must be non-empty");
    cfg.description = root.string("description").value_or("");

    if (auto r = root.object("plant")) {
        auto& p = cfg.plant;
        p.grav = r->number("grav", p.grav);
        p.gamma = r->number("gamma", p.gamma);
        p.c = r->number("c", p.c);
        p.D_sf = r->number("D_sf", p.D_sf);
        p.T = r->number("T", p.T);
        p.v_star = r->number("v_star", p.v_star);
        if (!(p.grav > 0)) throw ConfigError("plant.grav", "must be > 0");
        if (!(p.gamma >= 0)) throw ConfigError("plant.gamma", "must be >= 0");
        if (!(p.c >= 0)) throw ConfigError("plant.c", "must be >= 0");
        if (!(p.D_sf > 0)) throw ConfigError("plant.D_sf", "must be > 0");
        if (!(p.T > 0)) throw ConfigError("plant.T", "must be > 0");
        if (!(p.v_star >= 0)) throw ConfigError("plant.v_star", "must be >= 0");
        r->done();
    }
    cfg.lead_speed.value = cfg.plant.v_star;

    if (auto r = root.object("controller")) {
        auto& c = cfg.controller;
        c.kind = r->string("kind").value_or(c.kind);
        if (!controller_kind_from_string(c.kind))
            throw ConfigError("controller.kind",
                              "must be nominal, dob, worst_case or transient_cancel");
        c.alpha = r->number("alpha", c.alpha);
        if (!(c.alpha > 0)) throw ConfigError("controller.alpha", "must be > 0");
        c.sigma = r->number_or_symbol("sigma", {"bh_over_kb", "max_error"}).value_or(0.0);
        if (auto* v = std::get_if<double>(&c.sigma); v && *v < 0)
            throw ConfigError("controller.sigma", "must be >= 0");
        c.p_bar = r->number_or_symbol("p_bar", {"auto"});
        if (c.p_bar)
            if (auto* v = std::get_if<double>(&*c.p_bar); v && *v < 0)
                throw ConfigError("controller.p_bar", "must be >= 0");
        c.u_min = r->number("u_min");
        c.u_max = r->number("u_max");
        if (c.u_min && c.u_max && *c.u_min > *c.u_max)
            throw ConfigError("controller.u_min", "must be <= u_max");
        r->done();
    }
    if (cfg.controller.kind == "worst_case" && !cfg.controller.p_bar)
        throw ConfigError("controller.p_bar", "required for worst_case");

    if (auto r = root.object("observer")) {
        auto& o = cfg.observer;
        o.k_b = r->number("k_b", o.k_b);
        if (!(o.k_b > 0)) throw ConfigError("observer.k_b", "must be > 0");
        o.b_h = r->number_or_symbol("b_h", {"auto"}).value_or(std::string("auto"));
        if (auto* v = std::get_if<double>(&o.b_h); v && *v < 0)
            throw ConfigError("observer.b_h", "must be >= 0");
        o.e0_abs = r->number_or_symbol("e0_abs", {"auto"}).value_or(std::string("auto"));
        if (auto* v = std::get_if<double>(&o.e0_abs); v && *v < 0)
            throw ConfigError("observer.e0_abs", "must be >= 0");
        o.initial_error = r->number("initial_error");
        const auto bh0 = r->number("b_hat0");
        if (bh0 && o.initial_error)
            throw ConfigError("observer.b_hat0", "give either b_hat0 or initial_error");
        o.b_hat0 = bh0.value_or(0.0);
        r->done();
    }

    if (auto r = root.object("signals")) {
        if (auto g = r->object("grade")) cfg.grade = detail::parse_signal(*g, true);
        if (auto l = r->object("lead_speed"))
            cfg.lead_speed = detail::parse_signal(*l, false);
        r->done();
    }

    if (auto r = root.object("delay")) {
        cfg.delay.tau = r->number("tau", 0.0);
        if (!(cfg.delay.tau >= 0)) throw ConfigError("delay.tau", "must be >= 0");
        cfg.delay.prehistory = r->string("prehistory").value_or("controller");
        if (cfg.delay.prehistory != "controller" && cfg.delay.prehistory != "zero")
            throw ConfigError("delay.prehistory", "must be controller or zero");
        r->done();
    }

    if (auto r = root.object("integrator")) {
        auto& i = cfg.integrator;
        i.step = r->number("step", i.step);
        i.duration = r->number("duration", i.duration);
        i.eps_int = r->number("eps_int", i.eps_int);
        if (!(i.step > 0)) throw ConfigError("integrator.step", "must be > 0");
        if (!(i.duration >= 0)) throw ConfigError("integrator.duration", "must be >= 0");
        if (i.duration > 0 && i.duration < i.step)
            throw ConfigError("integrator.duration", "must be >= step");
        if (!(i.eps_int > 0)) throw ConfigError("integrator.eps_int", "must be > 0");
        r->done();
    }

    if (auto r = root.object("initial_state")) {
        auto& s = cfg.initial_state;
        s.D0 = r->number("D0");
        s.v0 = r->number("v0");
        s.h0 = r->number_or_symbol("h0", {"c0_threshold"});
        if (s.D0 && s.h0) throw ConfigError("initial_state.h0", "give either D0 or h0");
        r->done();
    }

    if (auto r = root.object("output")) {
        const double d = r->number("decimation", 100.0);
        if (!(d >= 1) || d != std::floor(d))
            throw ConfigError("output.decimation", "must be a positive integer");
        cfg.output.decimation = static_cast<std::size_t>(d);
        r->done();
    }
    root.done();
    return cfg;
}

inline ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", "cannot open '" + path.string() + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
    }
    return parse_scenario(j, path.parent_path());
}

// ---------------------------------------------------------------------------
// Serialization

namespace detail {

inline Json to_json(const NumberOrSymbol& v) {
    if (const auto* d = std::get_if<double>(&v)) return *d;
    return std::get<std::string>(v);
}

inline Json signal_to_json(const SignalSpec& s, bool angle) {
    Json j;
    j["kind"] = s.kind;
    const std::string suffix = (angle && s.degrees) ? "_deg" : "";
    if (s.kind == "constant") {
        j["value" + suffix] = s.value;
    } else if (s.kind == "sinusoid") {
        j["amplitude" + suffix] = s.amplitude;
        if (s.omega) j["omega"] = *s.omega;
        if (s.omega_hz) j["omega_hz"] = *s.omega_hz;
        j["phase"] = s.phase;
    } else {
        j["path"] = s.path;
        j["column"] = s.column;
        if (angle) j["degrees"] = s.degrees;
    }
    return j;
}

}  // namespace detail

inline Json to_json(const ScenarioConfig& c) {
    Json j;
    j["id"] = c.id;
    if (!c.description.empty()) j["description"] = c.description;
    j["plant"] = {{"grav", c.plant.grav}, {"gamma", c.plant.gamma}, {"c", c.plant.c},
                  {"D_sf", c.plant.D_sf}, {"T", c.plant.T},         {"v_star", c.plant.v_star}};
    Json ctrl;
    ctrl["kind"] = c.controller.kind;
    ctrl["alpha"] = c.controller.alpha;
    ctrl["sigma"] = detail::to_json(c.controller.sigma);
    if (c.controller.p_bar) ctrl["p_bar"] = detail::to_json(*c.controller.p_bar);
    if (c.controller.u_min) ctrl["u_min"] = *c.controller.u_min;
    if (c.controller.u_max) ctrl["u_max"] = *c.controller.u_max;
    j["controller"] = ctrl;
    Json obs;
    obs["k_b"] = c.observer.k_b;
    obs["b_h"] = detail::to_json(c.observer.b_h);
    obs["e0_abs"] = detail::to_json(c.observer.e0_abs);
    if (c.observer.initial_error)
        obs["initial_error"] = *c.observer.initial_error;
    else
        obs["b_hat0"] = c.observer.b_hat0;
    j["observer"] = obs;
    j["signals"] = {{"grade", detail::signal_to_json(c.grade, true)},
                    {"lead_speed", detail::signal_to_json(c.lead_speed, false)}};
    j["delay"] = {{"tau", c.delay.tau}, {"prehistory", c.delay.prehistory}};
    j["integrator"] = {{"step", c.integrator.step},
                       {"duration", c.integrator.duration},
                       {"eps_int", c.integrator.eps_int}};
    Json init = Json::object();
    if (c.initial_state.D0) init["D0"] = *c.initial_state.D0;
    if (c.initial_state.v0) init["v0"] = *c.initial_state.v0;
    if (c.initial_state.h0) init["h0"] = detail::to_json(*c.initial_state.h0);
    j["initial_state"] = init;
    j["output"] = {{"decimation", c.output.decimation}};
    return j;
}

/// 64-bit FNV-1a of the canonical serialization, as 16 hex digits.
inline std::string config_hash(const ScenarioConfig& c) {
    const std::string s = to_json(c).dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------
// Resolution

struct ResolvedScenario {
    SimulationSetup<TruckModel> setup;
    double sigma = 0.0;
    double b_h = 0.0;
    double e0_abs = 0.0;
    double b0 = 0.0;      // true b at t = 0
    double b_hat0 = 0.0;
    double h0 = 0.0;
    double D0 = 0.0;
    double v0 = 0.0;
    std::optional<double> p_bar;
    std::optional<double> c0_threshold;
    std::string config_hash;
};

namespace detail {

inline SignalSource build_signal(const SignalSpec& s, bool angle,
                                 const std::filesystem::path& base_dir, const std::string& field) {
    const double scale = (angle && s.degrees) ? std::numbers::pi / 180.0 : 1.0;
    if (s.kind == "constant") return ConstantSignal{s.value * scale};
    if (s.kind == "sinusoid") {
        const double omega = s.omega ? *s.omega : 2 * std::numbers::pi * *s.omega_hz;
        return SinusoidSignal{s.amplitude * scale, omega, s.phase};
    }
    std::filesystem::path p(s.path);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    try {
        return load_timeseries(p.string(), s.column, scale);
    } catch (const ParseError& e) {
        throw ConfigError(field, p.string() + ": " + e.what());
    }
}

}  // namespace detail

inline ResolvedScenario resolve(const ScenarioConfig& cfg) {
    ResolvedScenario out;
    auto& setup = out.setup;
    const TruckParams& params = cfg.plant;
    setup.plant = TruckModel(params);
    setup.scenario_id = cfg.id;
    out.config_hash = config_hash(cfg);

    setup.disturbance = detail::build_signal(cfg.grade, true, cfg.base_dir, "signals.grade");
    setup.reference = detail::build_signal(cfg.lead_speed, false, cfg.base_dir, "signals.lead_speed");

    // Lipschitz constant of b(t) = T a(phi(t)).
    if (const auto* v = std::get_if<double>(&cfg.observer.b_h)) {
        out.b_h = *v;
    } else {
        const auto& var = setup.disturbance.variant();
        if (const auto* s = std::get_if<SinusoidSignal>(&var)) {
            out.b_h = sinusoid_lipschitz_bound(s->amplitude, s->omega, params);
        } else if (const auto* ts = std::get_if<TimeseriesSignal>(&var)) {
            out.b_h = max_secant_slope(*ts, [&](double phi) { return params.T * grade_accel(phi, params); });
        } else {
            out.b_h = 0.0;
        }
    }

    const double k_b = cfg.observer.k_b;
    const double alpha = cfg.controller.alpha;

    out.v0 = cfg.initial_state.v0.value_or(params.v_star);
    out.b0 = params.T * grade_accel(setup.disturbance(0.0), params);
    out.b_hat0 = cfg.observer.initial_error ? out.b0 - *cfg.observer.initial_error
                                            : cfg.observer.b_hat0;
    if (const auto* v = std::get_if<double>(&cfg.observer.e0_abs))
        out.e0_abs = *v;
    else
        out.e0_abs = std::abs(out.b0 - out.b_hat0);

    const double steady = out.b_h / k_b;
    if (k_b > alpha) out.c0_threshold = (out.e0_abs - steady) / (k_b - alpha);

    if (const auto* v = std::get_if<double>(&cfg.controller.sigma))
        out.sigma = *v;
    else if (std::get<std::string>(cfg.controller.sigma) == "bh_over_kb")
        out.sigma = steady;
    else
        out.sigma = std::max(out.e0_abs, steady);

    if (cfg.initial_state.D0) {
        out.D0 = *cfg.initial_state.D0;
        out.h0 = cbf_value({out.D0, out.v0}, params);
    } else {
        out.h0 = 0.0;
        if (cfg.initial_state.h0) {
            if (const auto* v = std::get_if<double>(&*cfg.initial_state.h0)) {
                out.h0 = *v;
            } else {
                if (!out.c0_threshold)
                    throw ConfigError("initial_state.h0",
                                      "c0_threshold requires observer.k_b > controller.alpha");
                out.h0 = *out.c0_threshold;
            }
        }
        out.D0 = params.D_sf + params.T * out.v0 + out.h0;
    }

    if (cfg.controller.p_bar) {
        if (const auto* v = std::get_if<double>(&*cfg.controller.p_bar))
            out.p_bar = *v;
        else
            out.p_bar = worst_case_grade_accel(setup.disturbance.max_abs(), params);
    }

    setup.controller.kind = *controller_kind_from_string(cfg.controller.kind);
    setup.controller.alpha = alpha;
    setup.controller.sigma = out.sigma;
    setup.controller.p_bar = out.p_bar;
    setup.controller.u_min = cfg.controller.u_min;
    setup.controller.u_max = cfg.controller.u_max;
    setup.observer = {k_b, out.b_h, out.e0_abs};
    setup.x0 = TruckModel::pack({out.D0, out.v0});
    setup.b_hat0 = out.b_hat0;
    setup.tau = cfg.delay.tau;
    setup.prehistory = cfg.delay.prehistory == "zero" ? Prehistory::zero : Prehistory::controller;
    setup.integrator = {cfg.integrator.step, cfg.integrator.duration, cfg.integrator.eps_int};
    setup.decimation = cfg.output.decimation;
    return out;
}

/// Runs a resolved scenario with truck column names; metadata carries the config hash.
inline Trajectory simulate(const ResolvedScenario& rs) {
    Trajectory traj = run_scenario(rs.setup, {"D", "v"});
    traj.meta.config_hash = rs.config_hash;
    return traj;
}

// ---------------------------------------------------------------------------
// Report JSON

inline Json to_json(const SafetyCertificate& c) {
    Json j;
    j["statement"] = c.statement;
    j["verdict"] = c.provably_safe ? "provably-safe" : "not-certified";
    j["sigma_required_1"] = c.sigma_required_1;
    j["sigma_required_2"] = c.sigma_required_2;
    j["c0_threshold"] = c.c0_threshold ? Json(*c.c0_threshold) : Json(nullptr);
    j["h_x0"] = c.h_x0;
    j["input_clamped"] = c.input_clamped;
    if (c.input_clamped) j["note"] = "input clamp configured: guarantee void";
    return j;
}

inline Json resolved_to_json(const ResolvedScenario& rs) {
    const auto& s = rs.setup;
    Json j;
    j["sigma"] = rs.sigma;
    j["alpha"] = s.controller.alpha;
    j["k_b"] = s.observer.k_b;
    j["b_h"] = rs.b_h;
    j["e0_abs"] = rs.e0_abs;
    j["b0"] = rs.b0;
    j["b_hat0"] = rs.b_hat0;
    j["h0"] = rs.h0;
    j["D0"] = rs.D0;
    j["v0"] = rs.v0;
    j["p_bar"] = rs.p_bar ? Json(*rs.p_bar) : Json(nullptr);
    j["c0_threshold"] = rs.c0_threshold ? Json(*rs.c0_threshold) : Json(nullptr);
    j["tau"] = s.tau;
    return j;
}

inline Json metadata_json(const ResolvedScenario& rs, const Trajectory& traj) {
    const auto& m = traj.meta;
    Json j;
    j["scenario_id"] = m.scenario_id;
    j["config_hash"] = m.config_hash;
    j["controller_kind"] = m.controller_kind;
    j["step"] = m.step;
    j["steps"] = m.steps;
    j["tau"] = m.tau;
    j["tau_snap_error"] = m.tau_snap_error;
    j["resolved"] = resolved_to_json(rs);
    j["certificate"] = m.certificate ? to_json(*m.certificate) : Json(nullptr);
    j["min_h"] = m.min_h;
    j["min_h_time"] = m.min_h_time;
    j["first_unsafe_time"] = m.first_unsafe_time ? Json(*m.first_unsafe_time) : Json(nullptr);
    j["max_abs_error"] = m.max_abs_error;
    j["max_error_minus_bound"] = m.max_error_excess;
    j["saturation_events"] = m.saturation_events;
    j["samples"] = traj.size();
    return j;
}

/// Declarative panels for an external plotter.
inline Json plot_spec_json(const std::string& id, const std::string& csv_name) {
    Json j;
    j["figure"] = id;
    j["data"] = csv_name;
    j["x"] = "t";
    j["panels"] = Json::array({
        Json{{"title", "road grade"}, {"y", Json::array({"phi"})}, {"units", "rad"}},
        Json{{"title", "barrier"}, {"y", Json::array({"h", "y_bound", "h_bar"})}, {"units", "m"}},
        Json{{"title", "disturbance effect"}, {"y", Json::array({"b", "b_hat"})}, {"units", "m/s"}},
        Json{{"title", "observer error"}, {"y", Json::array({"e", "e_bound"})}, {"units", "m/s"}},
        Json{{"title", "input"}, {"y", Json::array({"u_cmd", "u_applied"})}, {"units", "m/s^2"}},
    });
    return j;
}

}  // namespace dobcbf
