#pragma once

// Connected-cruise-control truck: headway D and speed v behind a lead
// vehicle whose speed v1 is known over V2V, with unknown road grade.
//
//   D' = v1 - v
//   v' = u - a(phi) - c v^2,      a(phi) = g (sin phi + gamma cos phi)
//
// Safe set from the time-headway barrier h = D - D_sf - T v.

#include <algorithm>
#include <cmath>
#include <numbers>

#include "errors.hpp"
#include "plant.hpp"

namespace dobcbf {

struct TruckParams {
    double grav = 9.81;      // m/s^2
    double gamma = 0.006;    // rolling resistance
    double c = 0.000428;     // air drag, 1/m
    double D_sf = 5.0;       // safe stopping distance, m
    double T = 2.0;          // safe time headway, s
    double v_star = 20.0;    // reference speed, m/s

    double kappa() const { return 1.0 / T; }

    void validate() const {
        auto finite = [](double v) { return std::isfinite(v); };
        if (!finite(grav) || grav <= 0) throw InvalidArgument("grav must be > 0");
        if (!finite(gamma) || gamma < 0) throw InvalidArgument("gamma must be >= 0");
        if (!finite(c) || c < 0) throw InvalidArgument("c must be >= 0");
        if (!finite(D_sf) || D_sf <= 0) throw InvalidArgument("D_sf must be > 0");
        if (!finite(T) || T <= 0) throw InvalidArgument("T must be > 0");
        if (!finite(v_star) || v_star < 0) throw InvalidArgument("v_star must be >= 0");
    }
};

struct TruckState {
    double D = 0.0;  // headway, m
    double v = 0.0;  // ego speed, m/s
};

struct TruckFields {
    Vec<2> f;
    Vec<2> g;
    Vec<2> p;
};

struct LieDerivatives {
    double Lfh;
    double Lgh;
};

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

/// Grade resistance a(phi) = g (sin phi + gamma cos phi).
inline double grade_accel(double phi, const TruckParams& p) {
    return p.grav * (std::sin(phi) + p.gamma * std::cos(phi));
}

/// d a / d phi.
inline double grade_accel_slope(double phi, const TruckParams& p) {
    return p.grav * (std::cos(phi) - p.gamma * std::sin(phi));
}

inline TruckFields truck_fields(const TruckState& x, const Signals& sig, const TruckParams& p) {
    return {{sig.r - x.v, -p.c * x.v * x.v}, {0.0, 1.0}, {0.0, -grade_accel(sig.w, p)}};
}

inline double cbf_value(const TruckState& x, const TruckParams& p) {
    return x.D - p.D_sf - p.T * x.v;
}

inline Vec<2> cbf_gradient(const TruckParams& p) { return {1.0, -p.T}; }

inline LieDerivatives lie_derivatives(const TruckState& x, const Signals& sig,
                                      const TruckParams& p) {
    return {sig.r - x.v + p.T * p.c * x.v * x.v, -p.T};
}

/// b = dh/dx p(x,w) = (-T)(-a(phi)) = T a(phi).
inline double disturbance_effect(const TruckState& /*x*/, double phi, const TruckParams& p) {
    return p.T * grade_accel(phi, p);
}

/// Lipschitz constant of t -> b for phi(t) = Phi sin(omega t):
/// |db/dt| = T |a'(phi)| |phi'| <= T g sqrt(1 + gamma^2) Phi omega.
inline double sinusoid_lipschitz_bound(double amplitude, double omega, const TruckParams& p) {
    return p.T * p.grav * std::sqrt(1.0 + p.gamma * p.gamma) * std::abs(amplitude) *
           std::abs(omega);
}

/// Worst-case |a(phi)| over |phi| <= phi_max (phi_max below pi/2).
inline double worst_case_grade_accel(double phi_max, const TruckParams& p) {
    return std::max(std::abs(grade_accel(phi_max, p)), std::abs(grade_accel(-phi_max, p)));
}

/// DisturbedPlant adapter over the free functions above.
class TruckModel {
public:
    static constexpr std::size_t kDim = 2;
    using State = Vec<2>;

    explicit TruckModel(TruckParams params = {}) : params_(params) {
        params_.validate();
        // L_g h = -T, nonzero by T > 0.
    }

    const TruckParams& params() const { return params_; }

    static TruckState unpack(const State& x) { return {x[0], x[1]}; }
    static State pack(const TruckState& x) { return {x.D, x.v}; }

    State drift(const State& x, double r) const {
        return truck_fields(unpack(x), {r, 0.0}, params_).f;
    }
    State input_gain(const State&) const { return {0.0, 1.0}; }
    State disturbance(const State& x, double w) const {
        return truck_fields(unpack(x), {0.0, w}, params_).p;
    }
    double barrier(const State& x) const { return cbf_value(unpack(x), params_); }
    State barrier_gradient(const State&) const { return cbf_gradient(params_); }
    double lie_drift(const State& x, double r) const {
        return lie_derivatives(unpack(x), {r, 0.0}, params_).Lfh;
    }
    double lie_input(const State& x) const {
        return lie_derivatives(unpack(x), {}, params_).Lgh;
    }
    double disturbance_effect(const State& x, double w) const {
        return dobcbf::disturbance_effect(unpack(x), w, params_);
    }
    // p = [0, -a]: only the speed channel is disturbed, so |b| <= T p_bar.
    double disturbance_effect_bound(const State&, double p_bar) const {
        return params_.T * p_bar;
    }

private:
    TruckParams params_;
};

static_assert(DisturbedPlant<TruckModel>);

}  // namespace dobcbf
