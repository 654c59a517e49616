#pragma once

// High-gain first-order disturbance observer for the barrier derivative:
//
//   b_hat = k_b h(x) - xi
//   xi'   = k_b (L_f h + L_g h u + b_hat)
//
// which gives b_hat' = k_b (b - b_hat) along the true dynamics.

#include <cmath>

#include "errors.hpp"
#include "plant.hpp"

namespace dobcbf {

struct ObserverConfig {
    double k_b = 1.0;     // gain, 1/s
    double b_h = 0.0;     // Lipschitz constant of t -> b(t)
    double e0_abs = 0.0;  // assumed |e(0)|

    double steady_state_error() const { return b_h / k_b; }

    void validate() const {
        if (!std::isfinite(k_b) || k_b <= 0) throw InvalidArgument("observer k_b must be > 0");
        if (!std::isfinite(b_h) || b_h < 0) throw InvalidArgument("observer b_h must be >= 0");
        if (!std::isfinite(e0_abs) || e0_abs < 0)
            throw InvalidArgument("observer e0_abs must be >= 0");
    }
};

struct ObserverState {
    double xi = 0.0;
};

inline double b_hat(double h, ObserverState s, double k_b) { return k_b * h - s.xi; }

template <DisturbedPlant P>
double b_hat(const P& plant, const typename P::State& x, ObserverState s, double k_b) {
    return b_hat(plant.barrier(x), s, k_b);
}

/// xi' for input u. This is the observer's own model of h', so only the
/// known parts (L_f h, L_g h) enter.
template <DisturbedPlant P>
double xi_rate(const P& plant, const typename P::State& x, double u, const Signals& sig,
               ObserverState s, double k_b) {
    return k_b * (plant.lie_drift(x, sig.r) + plant.lie_input(x) * u + b_hat(plant, x, s, k_b));
}

/// xi(0) that makes b_hat(0) equal `initial_estimate`.
inline ObserverState initial_observer_state(double h0, double k_b, double initial_estimate = 0.0) {
    return {k_b * h0 - initial_estimate};
}

/// |e(t)| <= (|e0| - b_h/k_b) exp(-k_b t) + b_h/k_b.
inline double observer_error_bound(double t, const ObserverConfig& cfg) {
    if (!(t >= 0)) throw InvalidArgument("observer_error_bound: t must be >= 0");
    const double steady = cfg.steady_state_error();
    return (cfg.e0_abs - steady) * std::exp(-cfg.k_b * t) + steady;
}

}  // namespace dobcbf
