#pragma once

#include <cstdint>
#include <random>

#include "dobcbf/dobcbf.hpp"

namespace testsupport {

/// Fixed-seed generator: property tests are reproducible run to run.
inline std::mt19937_64 rng(std::uint64_t salt = 0) { return std::mt19937_64(0x5eedULL + salt); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline const dobcbf::TruckParams kParams{};
inline const double kPhi = dobcbf::deg_to_rad(10.0);
inline const double kOmega = 2 * std::numbers::pi * 0.05;

/// Truck on the sinusoidal grade behind a constant-speed lead, dob controller.
inline dobcbf::SimulationSetup<dobcbf::TruckModel> sinusoid_setup(double k_b, double sigma,
                                                                  double h0, double e0,
                                                                  double duration) {
    using namespace dobcbf;
    SimulationSetup<TruckModel> s;
    s.plant = TruckModel(kParams);
    s.reference = ConstantSignal{kParams.v_star};
    s.disturbance = SinusoidSignal{kPhi, kOmega, 0.0};
    s.observer = {k_b, sinusoid_lipschitz_bound(kPhi, kOmega, kParams), std::abs(e0)};
    s.controller.kind = ControllerKind::dob;
    s.controller.alpha = 0.25;
    s.controller.sigma = sigma;
    s.x0 = TruckModel::pack({kParams.D_sf + kParams.T * kParams.v_star + h0, kParams.v_star});
    s.b_hat0 = disturbance_effect({0, 0}, 0.0, kParams) - e0;
    s.integrator.duration = duration;
    return s;
}

}  // namespace testsupport
