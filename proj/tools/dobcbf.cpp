// dobcbf: command-line front end for scenario runs, certificates and
// delay-stability charts of the DOB-CBF connected cruise controller.
//
// Exit codes
//   simulate: 0 ok, 1 config error, 2 runtime abort, 3 h < -eps_int observed
//   certify:  0 provably safe, 4 not certified, 1 config error
//   others:   0 ok, 1 argument or config error

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "dobcbf/dobcbf.hpp"

namespace fs = std::filesystem;
using dobcbf::Json;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeAbort = 2;
constexpr int kUnsafe = 3;
constexpr int kNotCertified = 4;

struct GlobalOptions {
    std::string out_dir = ".";
    std::optional<unsigned long> seed;  // reserved: every command is deterministic
    bool quiet = false;
};

void note(const GlobalOptions& g, const std::string& msg) {
    if (!g.quiet) std::cout << msg << '\n';
}

fs::path output_path(const GlobalOptions& g, const std::string& name) {
    fs::create_directories(g.out_dir);
    return fs::path(g.out_dir) / name;
}

void write_json(const fs::path& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << j.dump(2) << '\n';
}

std::string fmt(double v) { return dobcbf::format_number(v); }

dobcbf::TruckParams params_from(const std::optional<std::string>& config) {
    if (!config) return {};
    return dobcbf::load_scenario(*config).plant;
}

Json params_json(const dobcbf::TruckParams& p) {
    return {{"grav", p.grav}, {"gamma", p.gamma}, {"c", p.c}, {"D_sf", p.D_sf},
            {"T", p.T},       {"v_star", p.v_star}, {"kappa", p.kappa()}};
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
    std::string config;
    std::optional<double> tau;
    std::optional<double> duration;
    bool grade_degrees = false;
};

int cmd_simulate(const GlobalOptions& g, const SimulateArgs& a) {
    dobcbf::ResolvedScenario rs;
    try {
        auto cfg = dobcbf::load_scenario(a.config);
        if (a.tau) {
            if (!(*a.tau >= 0)) throw dobcbf::ConfigError("--tau", "must be >= 0");
            cfg.delay.tau = *a.tau;
        }
        if (a.duration) {
            if (!(*a.duration >= 0)) throw dobcbf::ConfigError("--duration", "must be >= 0");
            cfg.integrator.duration = *a.duration;
        }
        if (a.grade_degrees) {
            if (cfg.grade.kind != "timeseries")
                throw dobcbf::ConfigError("--grade-degrees", "needs a timeseries grade signal");
            cfg.grade.degrees = true;
        }
        rs = dobcbf::resolve(cfg);
        rs.setup.controller.validate();
        rs.setup.observer.validate();
    } catch (const dobcbf::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const dobcbf::InvalidArgument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    }

    dobcbf::Trajectory traj;
    try {
        traj = dobcbf::simulate(rs);
    } catch (const dobcbf::SimulationAbort& e) {
        std::cerr << "simulation aborted at t=" << fmt(e.time()) << ": " << e.what() << '\n';
        return kRuntimeAbort;
    } catch (const std::exception& e) {
        std::cerr << "simulation aborted: " << e.what() << '\n';
        return kRuntimeAbort;
    }

    const std::string id = rs.setup.scenario_id;
    const std::string csv_name = id + "_trajectory.csv";
    {
        std::ofstream out(output_path(g, csv_name));
        if (!out) {
            std::cerr << "cannot write trajectory\n";
            return kRuntimeAbort;
        }
        dobcbf::write_trajectory_csv(out, traj, "v1", "phi");
    }
    write_json(output_path(g, id + "_meta.json"), dobcbf::metadata_json(rs, traj));
    write_json(output_path(g, id + "_plot.json"), dobcbf::plot_spec_json(id, csv_name));

    const auto& m = traj.meta;
    note(g, id + ": " + std::to_string(traj.size()) + " samples, min h = " + fmt(m.min_h) +
                " at t = " + fmt(m.min_h_time) + ", max |e| - bound = " + fmt(m.max_error_excess));
    if (m.certificate) note(g, std::string("certificate: ") +
                                   (m.certificate->holds() ? "provably-safe (statement " +
                                                                 std::to_string(m.certificate->statement) + ")"
                                                           : "not-certified"));
    if (m.min_h < -rs.setup.integrator.eps_int) {
        std::cerr << id << ": safety violated, h = " << fmt(m.min_h) << " at t = "
                  << fmt(m.min_h_time) << '\n';
        return kUnsafe;
    }
    return kOk;
}

// ---------------------------------------------------------------------------

int cmd_certify(const GlobalOptions& g, const std::string& config) {
    dobcbf::ResolvedScenario rs;
    try {
        rs = dobcbf::resolve(dobcbf::load_scenario(config));
        rs.setup.controller.validate();
        rs.setup.observer.validate();
    } catch (const dobcbf::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const dobcbf::InvalidArgument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    }
    const auto& ctrl = rs.setup.controller;
    const auto cert = dobcbf::certify(ctrl, rs.setup.observer, rs.h0);
    Json j;
    j["scenario_id"] = rs.setup.scenario_id;
    j["controller_kind"] = std::string(dobcbf::to_string(ctrl.kind));
    j["resolved"] = dobcbf::resolved_to_json(rs);
    j["certificate"] = dobcbf::to_json(cert);
    const bool applicable = ctrl.kind == dobcbf::ControllerKind::dob;
    if (!applicable) j["certificate"]["note"] = "certificate applies to the dob controller only";
    const bool safe = applicable && cert.holds();
    j["verdict"] = safe ? "provably-safe" : "not-certified";
    if (!g.quiet) std::cout << j.dump(2) << '\n';
    write_json(output_path(g, rs.setup.scenario_id + "_certificate.json"), j);
    return safe ? kOk : kNotCertified;
}

// ---------------------------------------------------------------------------

struct ChartArgs {
    double tau = 0.8;
    double alpha_max = 2.0;
    double kb_max = 2.0;
    std::string form = "published";
    int grid = 20;
    int collocation = 32;
    double omega_min = 1e-4;
    double omega_max = 10.0;
    int omega_points = 2000;
    std::optional<std::string> config;
    std::optional<double> alpha;
    std::optional<double> k_b;
    std::string prefix = "chart";
};

int cmd_stability_chart(const GlobalOptions& g, const ChartArgs& a) {
    dobcbf::TruckParams p;
    std::optional<dobcbf::CharacteristicForm> form;
    try {
        p = params_from(a.config);
        form = dobcbf::characteristic_form_from_string(a.form);
        if (!form) throw dobcbf::ConfigError("--form", "must be published or linearized");
        if (!(a.tau >= 0)) throw dobcbf::ConfigError("--tau", "must be >= 0");
        if (a.grid < 0) throw dobcbf::ConfigError("--grid", "must be >= 0");
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    }

    dobcbf::StabilityChart chart;
    try {
        chart = dobcbf::stability_boundary(
            a.tau, p, dobcbf::log_grid(a.omega_min, a.omega_max, static_cast<std::size_t>(a.omega_points)),
            *form, a.alpha_max, a.kb_max);
    } catch (const dobcbf::InvalidArgument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    }

    {
        std::ofstream out(output_path(g, a.prefix + ".csv"));
        out << "omega,alpha,k_b,branch\n";
        for (const auto& pt : chart.points)
            out << fmt(pt.omega) << ',' << fmt(pt.alpha) << ',' << fmt(pt.k_b) << ',' << pt.branch
                << '\n';
    }

    const auto cd = dobcbf::critical_delay(p);
    Json side;
    side["tau"] = a.tau;
    side["form"] = a.form;
    side["params"] = params_json(p);
    side["alpha_max"] = a.alpha_max;
    side["kb_max"] = a.kb_max;
    side["omega_cr"] = cd.omega_cr;
    side["tau_cr"] = cd.tau_cr;
    side["tau_crossing"] = dobcbf::crossing_delay(p, *form);
    side["omega_grid"] = {{"min", a.omega_min}, {"max", a.omega_max}, {"points", a.omega_points}};
    side["singular_omegas"] = chart.gaps;

    if (a.grid > 0) {
        const auto cells = dobcbf::classify_grid(a.tau, p, a.alpha_max, a.kb_max, a.grid,
                                                 a.collocation, *form);
        std::ofstream out(output_path(g, a.prefix + "_grid.csv"));
        out << "alpha,k_b,stable,rightmost_re,boundary_stable\n";
        std::size_t stable = 0, agree = 0;
        for (const auto& c : cells) {
            const bool by_chart = dobcbf::classify_by_boundary(chart, p, c.alpha, c.k_b);
            stable += c.stable;
            agree += by_chart == c.stable;
            out << fmt(c.alpha) << ',' << fmt(c.k_b) << ',' << int(c.stable) << ','
                << fmt(c.rightmost_re) << ',' << int(by_chart) << '\n';
        }
        side["grid"] = {{"n", a.grid}, {"collocation", a.collocation},
                        {"stable_cells", stable}, {"agreeing_cells", agree}};
    }

    if (a.alpha || a.k_b) {
        if (!(a.alpha && a.k_b)) {
            std::cerr << "config error: --alpha and --kb go together\n";
            return kConfigError;
        }
        const auto v = dobcbf::is_stable(*a.alpha, *a.k_b, a.tau, p, a.collocation, *form);
        side["point"] = {{"alpha", *a.alpha},
                         {"k_b", *a.k_b},
                         {"stable", v.stable},
                         {"rightmost_re", v.rightmost.real()},
                         {"rightmost_im", v.rightmost.imag()},
                         {"boundary_stable", dobcbf::classify_by_boundary(chart, p, *a.alpha, *a.k_b)}};
        note(g, "(alpha, k_b) = (" + fmt(*a.alpha) + ", " + fmt(*a.k_b) + ") at tau = " +
                    fmt(a.tau) + ": " + (v.stable ? "stable" : "unstable") +
                    ", rightmost Re = " + fmt(v.rightmost.real()));
    }
    write_json(output_path(g, a.prefix + ".json"), side);
    note(g, "wrote " + std::to_string(chart.points.size()) + " boundary points to " +
                output_path(g, a.prefix + ".csv").string());
    return kOk;
}

int cmd_critical_delay(const GlobalOptions& g, const std::optional<std::string>& config) {
    dobcbf::TruckParams p;
    dobcbf::CriticalDelay cd;
    try {
        p = params_from(config);
        cd = dobcbf::critical_delay(p);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    }
    Json j;
    j["params"] = params_json(p);
    j["omega_cr"] = cd.omega_cr;
    j["tau_cr"] = cd.tau_cr;
    j["tau_crossing"] = cd.tau_crossing;
    if (!g.quiet) std::cout << j.dump(2) << '\n';
    return kOk;
}

struct BoundArgs {
    double k_b = 0.55;
    double b_h = 0.0;
    double e0 = 0.0;
    double t_max = 120.0;
    double dt = 0.1;
};

int cmd_error_bound(const GlobalOptions& g, const BoundArgs& a, bool to_file) {
    const dobcbf::ObserverConfig obs{a.k_b, a.b_h, std::abs(a.e0)};
    try {
        obs.validate();
        if (!(a.dt > 0) || !(a.t_max >= 0)) throw dobcbf::InvalidArgument("need dt > 0, t_max >= 0");
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    }
    std::ofstream file;
    if (to_file) file.open(output_path(g, "error_bound.csv"));
    std::ostream& out = to_file ? file : std::cout;
    out << "t,bound\n";
    const auto n = static_cast<std::size_t>(std::llround(a.t_max / a.dt));
    for (std::size_t k = 0; k <= n; ++k) {
        const double t = static_cast<double>(k) * a.dt;
        out << fmt(t) << ',' << fmt(dobcbf::observer_error_bound(t, obs)) << '\n';
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Disturbance-observer CBF toolkit for connected cruise control"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--out-dir", g.out_dir, "Directory for output files")->capture_default_str();
    app.add_option("--seed", g.seed, "Reserved; all commands are deterministic");
    app.add_flag("--quiet", g.quiet, "Suppress console summaries");

    SimulateArgs sim;
    auto* s_sim = app.add_subcommand("simulate", "Run a scenario and write trajectory CSV + metadata");
    s_sim->add_option("config", sim.config, "Scenario JSON")->required();
    s_sim->add_option("--tau", sim.tau, "Override delay.tau [s]");
    s_sim->add_option("--duration", sim.duration, "Override integrator.duration [s]");
    s_sim->add_flag("--grade-degrees", sim.grade_degrees, "Timeseries grade column is in degrees");

    std::string cert_config;
    auto* s_cert = app.add_subcommand("certify", "Check the robust-safety conditions for a scenario");
    s_cert->add_option("config", cert_config, "Scenario JSON")->required();

    ChartArgs chart;
    auto* s_chart = app.add_subcommand("stability-chart", "Delay stability boundaries in (alpha, k_b)");
    s_chart->add_option("--tau", chart.tau, "Input delay [s]")->capture_default_str();
    s_chart->add_option("--alpha-max", chart.alpha_max)->capture_default_str();
    s_chart->add_option("--kb-max", chart.kb_max)->capture_default_str();
    s_chart->add_option("--form", chart.form, "published | linearized")->capture_default_str();
    s_chart->add_option("--grid", chart.grid, "Spectral check grid size n (0: off)")->capture_default_str();
    s_chart->add_option("--collocation", chart.collocation, "Chebyshev order")->capture_default_str();
    s_chart->add_option("--omega-min", chart.omega_min)->capture_default_str();
    s_chart->add_option("--omega-max", chart.omega_max)->capture_default_str();
    s_chart->add_option("--omega-points", chart.omega_points)->capture_default_str();
    s_chart->add_option("--config", chart.config, "Scenario JSON supplying plant parameters");
    s_chart->add_option("--alpha", chart.alpha, "Classify this alpha");
    s_chart->add_option("--kb", chart.k_b, "Classify this k_b");
    s_chart->add_option("--prefix", chart.prefix, "Output file stem")->capture_default_str();

    std::optional<std::string> cd_config;
    auto* s_cd = app.add_subcommand("critical-delay", "Critical delay of the alpha = k_b = 0 limit");
    s_cd->add_option("--config", cd_config, "Scenario JSON supplying plant parameters");

    BoundArgs bound;
    auto* s_bound = app.add_subcommand("error-bound", "Observer error bound over time");
    s_bound->add_option("--k-b", bound.k_b)->capture_default_str();
    s_bound->add_option("--b-h", bound.b_h)->capture_default_str();
    s_bound->add_option("--e0", bound.e0, "Initial error (sign ignored)")->capture_default_str();
    s_bound->add_option("--t-max", bound.t_max)->capture_default_str();
    s_bound->add_option("--dt", bound.dt)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kConfigError;
    }

    try {
        if (*s_sim) return cmd_simulate(g, sim);
        if (*s_cert) return cmd_certify(g, cert_config);
        if (*s_chart) return cmd_stability_chart(g, chart);
        if (*s_cd) return cmd_critical_delay(g, cd_config);
        if (*s_bound) return cmd_error_bound(g, bound, app.get_option("--out-dir")->count() > 0);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return *s_sim ? kRuntimeAbort : kConfigError;
    }
    return kConfigError;
}
