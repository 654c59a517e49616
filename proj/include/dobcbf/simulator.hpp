#pragma once

// Fixed-step RK4 co-simulation of plant and observer, z = [x, xi], with an
// optional constant input delay.
//
// The plant sees u(t - tau); the observer is driven by the undelayed
// command k(x(t), r(t), xi(t)), so with tau > 0 it also absorbs the delay
// mismatch L_g h (u(t - tau) - u(t)) into b_hat. With tau = 0 the
// controller is re-evaluated at every RK stage (continuous feedback). With
// tau > 0 the delayed input is held across the step.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "delay_buffer.hpp"
#include "errors.hpp"
#include "observer.hpp"
#include "plant.hpp"
#include "safety_controller.hpp"
#include "signal_source.hpp"

namespace dobcbf {

struct IntegratorConfig {
    double step = 1e-3;      // s
    double duration = 120;   // s
    double eps_int = 1e-3;   // slack accepted by invariant checks, h units

    void validate() const {
        if (!std::isfinite(step) || step <= 0) throw InvalidArgument("integrator step must be > 0");
        if (!std::isfinite(duration) || duration < 0)
            throw InvalidArgument("integrator duration must be >= 0");
        if (duration > 0 && duration < step)
            throw InvalidArgument("integrator duration must be >= step");
        if (!std::isfinite(eps_int) || eps_int <= 0)
            throw InvalidArgument("integrator eps_int must be > 0");
    }

    std::size_t steps() const { return static_cast<std::size_t>(std::llround(duration / step)); }
};

enum class Prehistory { controller, zero };

template <std::size_t N>
using Augmented = Vec<N + 1>;

/// Command law u = k(x, sig, xi, t), before clamping.
template <DisturbedPlant P>
using CommandFn =
    std::function<double(const typename P::State&, const Signals&, ObserverState, double)>;

template <DisturbedPlant P>
struct ClosedLoop {
    const P* plant = nullptr;
    ControllerConfig controller;
    ObserverConfig observer;
    SignalSource reference;
    SignalSource disturbance;
    CommandFn<P> command;  // empty: use controller.kind

    Signals signals(double t) const { return {reference(t), disturbance(t)}; }

    double command_at(const typename P::State& x, const Signals& sig, ObserverState xi,
                      double t) const {
        if (command) return command(x, sig, xi, t);
        return control(*plant, x, sig, xi, controller, observer, t);
    }
};

template <std::size_t N>
struct Split {
    Vec<N> x;
    ObserverState xi;
};

template <std::size_t N>
Split<N> split(const Augmented<N>& z) {
    Split<N> s;
    for (std::size_t i = 0; i < N; ++i) s.x[i] = z[i];
    s.xi.xi = z[N];
    return s;
}

template <std::size_t N>
Augmented<N> join(const Vec<N>& x, ObserverState xi) {
    Augmented<N> z;
    for (std::size_t i = 0; i < N; ++i) z[i] = x[i];
    z[N] = xi.xi;
    return z;
}

/// Augmented vector field. `held_input` is the delayed plant input when
/// tau > 0; empty means the plant sees the current command.
template <DisturbedPlant P>
Augmented<P::kDim> closed_loop_field(const ClosedLoop<P>& loop, const Augmented<P::kDim>& z,
                                     double t, std::optional<double> held_input) {
    constexpr std::size_t N = P::kDim;
    const auto [x, xi] = split<N>(z);
    const Signals sig = loop.signals(t);
    const double u_now =
        apply_input_limits(loop.command_at(x, sig, xi, t), loop.controller).value;
    const double u_plant = held_input.value_or(u_now);
    const P& plant = *loop.plant;
    const auto xdot = plant.drift(x, sig.r) + u_plant * plant.input_gain(x) +
                      plant.disturbance(x, sig.w);
    return join<N>(xdot, {xi_rate(plant, x, u_now, sig, xi, loop.observer.k_b)});
}

struct StepInputs {
    double u_cmd = 0.0;      // controller output at the grid point (unclamped)
    double u_applied = 0.0;  // input acting on the plant over the step
    bool saturated = false;
};

/// Advance z by one RK4 step from grid time t. The command at t is pushed
/// into `delay`; the returned inputs are those at the grid point.
template <DisturbedPlant P>
Augmented<P::kDim> step_closed_loop(const ClosedLoop<P>& loop, const Augmented<P::kDim>& z,
                                    double t, DelayBuffer& delay, const IntegratorConfig& cfg,
                                    StepInputs* inputs = nullptr) {
    constexpr std::size_t N = P::kDim;
    const double h = cfg.step;
    const auto [x, xi] = split<N>(z);
    const Signals sig = loop.signals(t);
    const double u_cmd = loop.command_at(x, sig, xi, t);
    const ClampedInput clamped = apply_input_limits(u_cmd, loop.controller);

    std::optional<double> held;
    double u_applied = clamped.value;
    if (delay.delay_steps() > 0) {
        u_applied = delay.push(clamped.value);
        held = u_applied;
    } else {
        delay.push(clamped.value);
    }
    if (inputs) *inputs = {u_cmd, u_applied, clamped.saturated};

    const auto k1 = closed_loop_field(loop, z, t, held);
    const auto k2 = closed_loop_field(loop, z + (0.5 * h) * k1, t + 0.5 * h, held);
    const auto k3 = closed_loop_field(loop, z + (0.5 * h) * k2, t + 0.5 * h, held);
    const auto k4 = closed_loop_field(loop, z + h * k3, t + h, held);
    auto next = z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!all_finite(next)) throw SimulationAbort(t + h, "non-finite state");
    return next;
}

// ---------------------------------------------------------------------------
// Scenario runs

template <DisturbedPlant P>
struct SimulationSetup {
    P plant;
    ControllerConfig controller;
    ObserverConfig observer;
    SignalSource reference;
    SignalSource disturbance;
    typename P::State x0{};
    double b_hat0 = 0.0;  // initial estimate; xi(0) = k_b h(x0) - b_hat0
    double tau = 0.0;
    Prehistory prehistory = Prehistory::controller;
    IntegratorConfig integrator;
    std::size_t decimation = 1;
    std::string scenario_id;
    CommandFn<P> command;  // optional override of the controller law
};

struct TrajectoryMetadata {
    std::string scenario_id;
    std::string config_hash;
    std::string controller_kind;
    double step = 0.0;
    double tau = 0.0;               // after snapping to the grid
    double tau_snap_error = 0.0;
    std::optional<SafetyCertificate> certificate;
    double min_h = std::numeric_limits<double>::infinity();
    double min_h_time = 0.0;
    std::optional<double> first_unsafe_time;   // first grid time with h < 0
    double max_error_excess = -std::numeric_limits<double>::infinity();  // max(|e| - bound)
    double max_abs_error = 0.0;
    std::size_t saturation_events = 0;
    std::size_t steps = 0;
};

/// Uniformly sampled record of one run. All columns have equal length.
struct Trajectory {
    std::vector<std::string> state_names;
    std::vector<double> t;
    std::vector<std::vector<double>> states;  // [component][sample]
    std::vector<double> r, w, u_cmd, u_applied, h, b, b_hat, e, e_bound, y_bound, h_bar;
    TrajectoryMetadata meta;

    std::size_t size() const { return t.size(); }
};

template <DisturbedPlant P>
std::vector<std::string> default_state_names() {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < P::kDim; ++i) names.push_back("x" + std::to_string(i));
    return names;
}

/// Integrate the setup over [0, duration]; records every `decimation`-th
/// grid point, while the metadata statistics cover every grid point.
template <DisturbedPlant P>
Trajectory run_scenario(const SimulationSetup<P>& setup,
                        std::vector<std::string> state_names = default_state_names<P>()) {
    constexpr std::size_t N = P::kDim;
    setup.controller.validate();
    setup.observer.validate();
    setup.integrator.validate();
    if (setup.decimation == 0) throw InvalidArgument("decimation must be >= 1");
    if (!all_finite(setup.x0)) throw InvalidArgument("initial state must be finite");

    ClosedLoop<P> loop{&setup.plant,      setup.controller,   setup.observer,
                       setup.reference,   setup.disturbance,  setup.command};
    const IntegratorConfig& icfg = setup.integrator;
    DelayBuffer delay(setup.tau, icfg.step);

    const P& plant = setup.plant;
    const double h0 = plant.barrier(setup.x0);
    const ObserverState xi0 = initial_observer_state(h0, setup.observer.k_b, setup.b_hat0);
    Augmented<N> z = join<N>(setup.x0, xi0);

    if (setup.prehistory == Prehistory::controller) {
        const double u0 = loop.command_at(setup.x0, loop.signals(0.0), xi0, 0.0);
        delay.set_prehistory(apply_input_limits(u0, setup.controller).value);
    }

    const bool record_y =
        setup.controller.kind == ControllerKind::dob && setup.observer.k_b != setup.controller.alpha;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    Trajectory traj;
    traj.state_names = std::move(state_names);
    traj.states.resize(N);
    TrajectoryMetadata& meta = traj.meta;
    meta.scenario_id = setup.scenario_id;
    meta.controller_kind = std::string(to_string(setup.controller.kind));
    meta.step = icfg.step;
    meta.tau = delay.tau();
    meta.tau_snap_error = delay.snap_error();
    meta.certificate = certify(setup.controller, setup.observer, h0);

    const std::size_t n_steps = icfg.steps();
    meta.steps = n_steps;
    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * icfg.step;
        const auto [x, xi] = split<N>(z);
        const Signals sig = loop.signals(t);
        const double hx = plant.barrier(x);
        const double bx = plant.disturbance_effect(x, sig.w);
        const double bh = b_hat(hx, xi, setup.observer.k_b);
        const double err = bx - bh;
        const double bound = observer_error_bound(t, setup.observer);

        if (hx < meta.min_h) {
            meta.min_h = hx;
            meta.min_h_time = t;
        }
        if (hx < 0 && !meta.first_unsafe_time) meta.first_unsafe_time = t;
        meta.max_error_excess = std::max(meta.max_error_excess, std::abs(err) - bound);
        meta.max_abs_error = std::max(meta.max_abs_error, std::abs(err));

        StepInputs in;
        const bool last = k == n_steps;
        if (!last) {
            z = step_closed_loop(loop, z, t, delay, icfg, &in);
            if (in.saturated) ++meta.saturation_events;
        } else {
            // No step follows; report what would be commanded and applied.
            in.u_cmd = loop.command_at(x, sig, xi, t);
            DelayBuffer probe = delay;
            in.u_applied = probe.push(apply_input_limits(in.u_cmd, setup.controller).value);
        }

        if (k % setup.decimation == 0) {
            traj.t.push_back(t);
            for (std::size_t i = 0; i < N; ++i) traj.states[i].push_back(x[i]);
            traj.r.push_back(sig.r);
            traj.w.push_back(sig.w);
            traj.u_cmd.push_back(in.u_cmd);
            traj.u_applied.push_back(in.u_applied);
            traj.h.push_back(hx);
            traj.b.push_back(bx);
            traj.b_hat.push_back(bh);
            traj.e.push_back(err);
            traj.e_bound.push_back(bound);
            traj.y_bound.push_back(
                record_y ? comparison_lower_bound(t, h0, setup.controller, setup.observer) : nan);
            traj.h_bar.push_back(issf_shifted_barrier(hx, setup.controller, setup.observer));
        }
        if (last) break;
    }
    return traj;
}

}  // namespace dobcbf
