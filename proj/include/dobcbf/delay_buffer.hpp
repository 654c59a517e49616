#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "errors.hpp"

namespace dobcbf {

/// Constant input delay on a fixed integration grid. Stores one controller
/// output per grid step; the delay is a whole number of steps.
class DelayBuffer {
public:
    DelayBuffer() = default;

    /// `tau` is snapped to the nearest multiple of `step`; see snap_error().
    DelayBuffer(double tau, double step) {
        if (!(tau >= 0) || !std::isfinite(tau)) throw InvalidArgument("delay tau must be >= 0");
        if (!(step > 0)) throw InvalidArgument("delay step must be > 0");
        delay_steps_ = static_cast<std::size_t>(std::llround(tau / step));
        tau_ = static_cast<double>(delay_steps_) * step;
        snap_error_ = std::abs(tau_ - tau);
        ring_.assign(delay_steps_ + 1, 0.0);
    }

    double tau() const { return tau_; }
    std::size_t delay_steps() const { return delay_steps_; }
    double snap_error() const { return snap_error_; }

    /// Value returned for grid times before t = tau.
    void set_prehistory(double u) { prehistory_ = u; }

    /// Record the command at grid index `count()` and return the input that
    /// acts on the plant over the same step, u(t - tau).
    double push(double u) {
        ring_[count_ % ring_.size()] = u;
        const std::size_t k = count_++;
        if (k < delay_steps_) return prehistory_;
        return ring_[(k - delay_steps_) % ring_.size()];
    }

    std::size_t count() const { return count_; }

private:
    double tau_ = 0.0;
    double snap_error_ = 0.0;
    std::size_t delay_steps_ = 0;
    std::size_t count_ = 0;
    double prehistory_ = 0.0;
    std::vector<double> ring_ = std::vector<double>(1, 0.0);
};

}  // namespace dobcbf
