#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>

namespace dobcbf {

/// Known reference r (lead-vehicle speed for the truck) and unknown
/// disturbance w (road grade, rad). Single channel each.
struct Signals {
    double r = 0.0;
    double w = 0.0;
};

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
constexpr Vec<N> operator+(Vec<N> a, const Vec<N>& b) {
    for (std::size_t i = 0; i < N; ++i) a[i] += b[i];
    return a;
}

template <std::size_t N>
constexpr Vec<N> operator-(Vec<N> a, const Vec<N>& b) {
    for (std::size_t i = 0; i < N; ++i) a[i] -= b[i];
    return a;
}

template <std::size_t N>
constexpr Vec<N> operator*(double s, Vec<N> a) {
    for (auto& v : a) v *= s;
    return a;
}

template <std::size_t N>
constexpr double dot(const Vec<N>& a, const Vec<N>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) acc += a[i] * b[i];
    return acc;
}

template <std::size_t N>
bool all_finite(const Vec<N>& a) {
    for (double v : a)
        if (!std::isfinite(v)) return false;
    return true;
}

/// Disturbed control-affine plant  x' = f(x,r) + g(x) u + p(x,w)  with a
/// barrier h and the Lie derivatives the controllers and observer need.
/// Single input, scalar reference and disturbance.
template <typename P>
concept DisturbedPlant = requires(const P& plant, const typename P::State& x, double r,
                                  double w, double bound) {
    { P::kDim } -> std::convertible_to<std::size_t>;
    requires std::same_as<typename P::State, Vec<P::kDim>>;
    { plant.drift(x, r) } -> std::same_as<typename P::State>;
    { plant.input_gain(x) } -> std::same_as<typename P::State>;
    { plant.disturbance(x, w) } -> std::same_as<typename P::State>;
    { plant.barrier(x) } -> std::convertible_to<double>;
    { plant.barrier_gradient(x) } -> std::same_as<typename P::State>;
    { plant.lie_drift(x, r) } -> std::convertible_to<double>;
    { plant.lie_input(x) } -> std::convertible_to<double>;
    { plant.disturbance_effect(x, w) } -> std::convertible_to<double>;
    // Upper bound on |b(x,w)| given a componentwise bound on |p(x,w)|.
    { plant.disturbance_effect_bound(x, bound) } -> std::convertible_to<double>;
};

}  // namespace dobcbf
