#pragma once

// Closed-form CBF controllers for single-input plants. Each controller is
// the boundary element of its admissible set, i.e. the inequality
//   L_f h + L_g h u + (estimate) >= -alpha h + (margin)
// holds with equality.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "errors.hpp"
#include "observer.hpp"
#include "plant.hpp"
#include "vehicle_model.hpp"

namespace dobcbf {

enum class ControllerKind { nominal, dob, worst_case, transient_cancel };

inline std::string_view to_string(ControllerKind k) {
    switch (k) {
        case ControllerKind::nominal: return "nominal";
        case ControllerKind::dob: return "dob";
        case ControllerKind::worst_case: return "worst_case";
        case ControllerKind::transient_cancel: return "transient_cancel";
    }
    return "unknown";
}

inline std::optional<ControllerKind> controller_kind_from_string(std::string_view s) {
    if (s == "nominal") return ControllerKind::nominal;
    if (s == "dob") return ControllerKind::dob;
    if (s == "worst_case") return ControllerKind::worst_case;
    if (s == "transient_cancel") return ControllerKind::transient_cancel;
    return std::nullopt;
}

struct ControllerConfig {
    ControllerKind kind = ControllerKind::dob;
    double alpha = 0.25;               // 1/s
    double sigma = 0.0;                // robustness margin (dob)
    std::optional<double> p_bar;       // disturbance bound (worst_case)
    std::optional<double> u_min;       // optional input clamp
    std::optional<double> u_max;

    bool has_input_limits() const { return u_min.has_value() || u_max.has_value(); }

    void validate() const {
        if (!std::isfinite(alpha) || alpha <= 0) throw InvalidArgument("controller alpha must be > 0");
        if (!std::isfinite(sigma) || sigma < 0) throw InvalidArgument("controller sigma must be >= 0");
        if (p_bar && (!std::isfinite(*p_bar) || *p_bar < 0))
            throw InvalidArgument("controller p_bar must be >= 0");
        if (kind == ControllerKind::worst_case && !p_bar)
            throw InvalidArgument("worst_case controller requires p_bar");
        if (u_min && u_max && *u_min > *u_max) throw InvalidArgument("u_min must be <= u_max");
    }
};

namespace detail {

inline double solve_for_input(double lgh, double numerator) {
    if (lgh == 0.0) throw ControllerError("L_g h(x) = 0: controller undefined");
    return -numerator / lgh;
}

}  // namespace detail

/// k(x,r) = -(L_f h + alpha h) / L_g h.
template <DisturbedPlant P>
double nominal_control(const P& plant, const typename P::State& x, const Signals& sig,
                       const ControllerConfig& cfg) {
    return detail::solve_for_input(plant.lie_input(x),
                                   plant.lie_drift(x, sig.r) + cfg.alpha * plant.barrier(x));
}

/// k(x,r,xi) = -(L_f h + alpha h + b_hat - sigma) / L_g h.
template <DisturbedPlant P>
double dob_control(const P& plant, const typename P::State& x, const Signals& sig,
                   ObserverState xi, const ControllerConfig& cfg, double k_b) {
    const double h = plant.barrier(x);
    return detail::solve_for_input(
        plant.lie_input(x),
        plant.lie_drift(x, sig.r) + cfg.alpha * h + b_hat(h, xi, k_b) - cfg.sigma);
}

/// Worst-case robust CBF: -(L_f h + alpha h - |b|_max) / L_g h where
/// |b|_max follows from |p| <= p_bar.
template <DisturbedPlant P>
double worst_case_control(const P& plant, const typename P::State& x, const Signals& sig,
                          const ControllerConfig& cfg) {
    if (!cfg.p_bar) throw ControllerError("worst_case_control: p_bar unset");
    return detail::solve_for_input(plant.lie_input(x),
                                   plant.lie_drift(x, sig.r) + cfg.alpha * plant.barrier(x) -
                                       plant.disturbance_effect_bound(x, *cfg.p_bar));
}

/// dob_control with the margin replaced by the full time-varying error
/// bound, cancelling the transient observer error outright.
template <DisturbedPlant P>
double transient_cancel_control(const P& plant, const typename P::State& x, const Signals& sig,
                                ObserverState xi, const ControllerConfig& cfg,
                                const ObserverConfig& obs, double t) {
    ControllerConfig c = cfg;
    c.sigma = observer_error_bound(t, obs);
    return dob_control(plant, x, sig, xi, c, obs.k_b);
}

template <DisturbedPlant P>
double control(const P& plant, const typename P::State& x, const Signals& sig, ObserverState xi,
               const ControllerConfig& cfg, const ObserverConfig& obs, double t) {
    switch (cfg.kind) {
        case ControllerKind::nominal: return nominal_control(plant, x, sig, cfg);
        case ControllerKind::dob: return dob_control(plant, x, sig, xi, cfg, obs.k_b);
        case ControllerKind::worst_case: return worst_case_control(plant, x, sig, cfg);
        case ControllerKind::transient_cancel:
            return transient_cancel_control(plant, x, sig, xi, cfg, obs, t);
    }
    throw ControllerError("unknown controller kind");
}

/// Truck closed form of dob_control:
/// (alpha + k_b)(kappa (D - D_sf) - v) + kappa (v1 - v) + c v^2 - kappa (xi + sigma).
inline double truck_dob_control(const TruckState& x, const Signals& sig, ObserverState xi,
                                double alpha, double sigma, double k_b, const TruckParams& p) {
    const double kappa = p.kappa();
    return (alpha + k_b) * (kappa * (x.D - p.D_sf) - x.v) + kappa * (sig.r - x.v) +
           p.c * x.v * x.v - kappa * (xi.xi + sigma);
}

struct ClampedInput {
    double value;
    bool saturated;
};

inline ClampedInput apply_input_limits(double u, const ControllerConfig& cfg) {
    double v = u;
    if (cfg.u_min) v = std::max(v, *cfg.u_min);
    if (cfg.u_max) v = std::min(v, *cfg.u_max);
    return {v, v != u};
}

// ---------------------------------------------------------------------------
// Safety certificate

struct SafetyCertificate {
    int statement = 0;               // 1, 2, or 0 when neither branch applies
    double sigma_required_1 = 0.0;   // max{|e0|, b_h/k_b}
    double sigma_required_2 = 0.0;   // b_h/k_b
    std::optional<double> c0_threshold;  // (|e0| - b_h/k_b)/(k_b - alpha), when k_b > alpha
    double h_x0 = 0.0;
    bool provably_safe = false;
    bool input_clamped = false;      // a clamp voids the guarantee

    bool holds() const { return provably_safe && !input_clamped; }
};

/// Robust-safety verdict for the dob controller. Branch 1 (margin covers
/// the whole error bound) is tried before branch 2 (margin covers the
/// steady-state error and x0 starts deep enough inside the safe set).
inline SafetyCertificate certify(const ControllerConfig& cfg, const ObserverConfig& obs,
                                 double h_x0) {
    if (!(obs.k_b > 0)) throw InvalidArgument("certify: k_b must be > 0");
    if (!(cfg.alpha > 0)) throw InvalidArgument("certify: alpha must be > 0");

    SafetyCertificate cert;
    cert.h_x0 = h_x0;
    cert.sigma_required_2 = obs.steady_state_error();
    cert.sigma_required_1 = std::max(obs.e0_abs, cert.sigma_required_2);
    cert.input_clamped = cfg.has_input_limits();
    if (obs.k_b > cfg.alpha)
        cert.c0_threshold = (obs.e0_abs - cert.sigma_required_2) / (obs.k_b - cfg.alpha);

    if (cfg.sigma >= cert.sigma_required_1 && h_x0 >= 0) {
        cert.statement = 1;
    } else if (cfg.sigma >= cert.sigma_required_2 && cert.c0_threshold && h_x0 >= 0 &&
               h_x0 >= *cert.c0_threshold) {
        cert.statement = 2;
    }
    cert.provably_safe = cert.statement != 0;
    return cert;
}

/// Comparison-lemma lower bound y(t) <= h(x(t)) for the dob controller.
inline double comparison_lower_bound(double t, double h_x0, const ControllerConfig& cfg,
                                     const ObserverConfig& obs) {
    const double a = cfg.alpha;
    const double k = obs.k_b;
    if (k == a) throw InvalidArgument("comparison_lower_bound: k_b == alpha is not supported");
    if (!(t >= 0)) throw InvalidArgument("comparison_lower_bound: t must be >= 0");
    const double steady = obs.steady_state_error();
    const double ea = std::exp(-a * t);
    const double ek = std::exp(-k * t);
    return (h_x0 + (steady - obs.e0_abs) / (k - a)) * (ea - ek) + h_x0 * ek +
           (cfg.sigma - steady) / a * (1.0 - ea);
}

/// h_bar = h - (sigma - E)/alpha with E = max{|e0|, b_h/k_b}. Its
/// zero-superlevel set stays invariant for any sigma.
inline double issf_shifted_barrier(double h, const ControllerConfig& cfg,
                                   const ObserverConfig& obs) {
    if (!(cfg.alpha > 0)) throw InvalidArgument("issf_shifted_barrier: alpha must be > 0");
    const double E = std::max(obs.e0_abs, obs.steady_state_error());
    return h - (cfg.sigma - E) / cfg.alpha;
}

}  // namespace dobcbf
