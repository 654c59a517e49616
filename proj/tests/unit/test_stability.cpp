// Delayed closed loop: equilibrium, linearization, characteristic function,
// critical delay, stability boundaries and the spectral oracle.

#include <catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace dobcbf;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using testsupport::kParams;

namespace {

ControllerConfig dob_cfg(double alpha, double sigma) {
    ControllerConfig c;
    c.alpha = alpha;
    c.sigma = sigma;
    return c;
}

LinearizedModel truck_linearization(double alpha, double k_b, double sigma, double tau) {
    const TruckModel truck(kParams);
    const auto ctrl = dob_cfg(alpha, sigma);
    const ObserverConfig obs{k_b, 0.0, 0.0};
    const auto eq = find_equilibrium(truck, ctrl, obs);
    return linearize(truck, ctrl, obs, eq.z, kParams.v_star, tau);
}

Complex random_s(std::mt19937_64& g) {
    const double r = 5.0 * std::sqrt(testsupport::uniform(g, 0, 1));
    const double th = testsupport::uniform(g, 0, 2 * std::numbers::pi);
    return std::polar(r, th);
}

}  // namespace

TEST_CASE("critical delay values", "[stability]") {
    const auto cd = critical_delay(kParams);
    CHECK_THAT(cd.omega_cr, WithinAbs(0.4997068196452796, 1e-12));
    CHECK_THAT(cd.tau_cr, WithinAbs(3.074902267664376, 1e-10));
    CHECK_THAT(cd.tau_crossing, WithinAbs(3.211969414054666, 1e-10));
    CHECK(std::abs(cd.tau_cr - std::numbers::pi / (2 * kParams.kappa())) < 0.1);
    CHECK_THAT(crossing_delay(kParams, CharacteristicForm::published), WithinAbs(cd.tau_crossing, 1e-12));
    // The zero-gain limit has a root on the imaginary axis at the crossing delay.
    const Complex s(0.0, cd.omega_cr);
    const Complex H = characteristic_fn(s, 0.0, 0.0, cd.tau_crossing, kParams) / s;
    CHECK(std::abs(H) < 1e-12);
}

TEST_CASE("equilibrium matches the closed form", "[stability]") {
    const TruckModel truck(kParams);
    const auto ctrl = dob_cfg(0.25, 1.96);
    const ObserverConfig obs{0.55, 0.0, 0.0};
    const auto eq = find_equilibrium(truck, ctrl, obs);
    const auto closed = truck_equilibrium(kParams, ctrl, obs, kParams.v_star);
    CHECK(eq.residual < 1e-10);
    for (int i = 0; i < 3; ++i) CHECK_THAT(eq.z(i), WithinAbs(closed(i), 1e-9));
    CHECK_THAT(eq.z(0) - kParams.D_sf - kParams.T * eq.z(1), WithinAbs(1.96 / 0.25, 1e-9));
    // Newton from a poor guess lands on the same point.
    const auto far = find_equilibrium(truck, ctrl, obs, kParams.v_star, AugVec<2>(80.0, 15.0, 0.0));
    CHECK_THAT(far.z(0), WithinAbs(closed(0), 1e-8));
}

TEST_CASE("finite-difference linearization matches the closed-form matrices", "[stability]") {
    auto g = testsupport::rng(13);
    for (int i = 0; i < 10; ++i) {
        const double alpha = testsupport::uniform(g, 0.05, 2), k_b = testsupport::uniform(g, 0.05, 2);
        const double sigma = testsupport::uniform(g, 0, 3);
        const auto lm = truck_linearization(alpha, k_b, sigma, 0.8);
        Eigen::Matrix3d A, At;
        truck_delay_matrices(alpha, k_b, kParams, CharacteristicForm::linearized, A, At);
        CHECK((lm.A - A).cwiseAbs().maxCoeff() < 1e-7);
        CHECK((lm.A_tau - At).cwiseAbs().maxCoeff() < 1e-7);
        // The grade enters only the speed channel; the references only through the command.
        CHECK_THAT(lm.B_w(0), WithinAbs(0.0, 1e-9));
        CHECK_THAT(lm.B_w(1), WithinAbs(-grade_accel_slope(0.0, kParams), 1e-6));
        CHECK_THAT(lm.B_r(0), WithinAbs(1.0, 1e-7));
        CHECK_THAT(lm.B_rtau(1), WithinAbs(kParams.kappa(), 1e-7));
    }
}

TEST_CASE("determinant path reproduces the linearized characteristic function", "[stability]") {
    auto g = testsupport::rng(14);
    const auto lm = truck_linearization(0.25, 0.55, 1.96, 0.8);
    for (int i = 0; i < 100; ++i) {
        const Complex s = random_s(g);
        const Complex lhs = std::exp(s * lm.tau) * characteristic_det(lm, s);
        const Complex lin = characteristic_fn(s, 0.25, 0.55, 0.8, kParams, CharacteristicForm::linearized);
        CHECK(std::abs(lhs - lin) <= 1e-6 * std::abs(lin));
        // Against the published form the gap is exactly the drag-compensation term.
        const Complex pub = characteristic_fn(s, 0.25, 0.55, 0.8, kParams);
        const Complex gap = -2 * kParams.c * kParams.v_star * s * s;
        CHECK(std::abs((lhs - pub) - gap) <= 1e-6 * (1 + std::abs(pub)));
    }
}

TEST_CASE("closed-form matrices reproduce both characteristic forms exactly", "[stability]") {
    auto g = testsupport::rng(15);
    for (auto form : {CharacteristicForm::published, CharacteristicForm::linearized}) {
        Eigen::Matrix3d A, At;
        truck_delay_matrices(0.7, 1.3, kParams, form, A, At);
        LinearizedModel lm;
        lm.A = A;
        lm.A_tau = At;
        lm.tau = 1.7;
        for (int i = 0; i < 50; ++i) {
            const Complex s = random_s(g);
            const Complex H = characteristic_fn(s, 0.7, 1.3, 1.7, kParams, form);
            CHECK(std::abs(std::exp(s * 1.7) * characteristic_det(lm, s) - H) <= 1e-10 * (1 + std::abs(H)));
        }
    }
}

TEST_CASE("spectral oracle locates the rightmost root", "[stability]") {
    // Reference roots of the published form refined by Newton in 30-digit arithmetic.
    const auto stable = is_stable(0.25, 0.55, 0.8, kParams);
    CHECK(stable.stable);
    CHECK_THAT(stable.rightmost.real(), WithinAbs(-0.1871212013, 1e-8));
    CHECK_THAT(std::abs(stable.rightmost.imag()), WithinAbs(1.4693100604, 1e-8));
    const auto unstable = is_stable(0.25, 0.55, 3.2, kParams);
    CHECK_FALSE(unstable.stable);
    CHECK_THAT(unstable.rightmost.real(), WithinAbs(0.3417442493, 1e-8));
    CHECK_THAT(std::abs(unstable.rightmost.imag()), WithinAbs(0.5281804953, 1e-8));
    // The located root solves the characteristic equation.
    CHECK(std::abs(characteristic_fn(stable.rightmost, 0.25, 0.55, 0.8, kParams)) < 1e-8);
}

TEST_CASE("spectral oracle converges in the collocation order", "[stability]") {
    for (double tau : {0.4, 1.6, 3.0}) {
        const auto a = is_stable(0.6, 0.9, tau, kParams, 32).rightmost;
        const auto b = is_stable(0.6, 0.9, tau, kParams, 64).rightmost;
        CHECK(std::abs(a - b) < 1e-9);
    }
    CHECK_THROWS_AS(is_stable(0.6, 0.9, 1.0, kParams, 4), InvalidArgument);
}

TEST_CASE("zero delay reduces to the undelayed eigenvalues", "[stability][property]") {
    auto g = testsupport::rng(16);
    for (int i = 0; i < 100; ++i) {
        const double alpha = testsupport::uniform(g, 0.01, 2), k_b = testsupport::uniform(g, 0.01, 2);
        const auto v = is_stable(alpha, k_b, 0.0, kParams);
        CHECK(v.stable);
        CHECK(std::abs(characteristic_fn(v.rightmost, alpha, k_b, 0.0, kParams)) < 1e-9);
    }
}

TEST_CASE("boundary points solve the characteristic equation on the imaginary axis", "[stability]") {
    const auto chart = stability_boundary(0.8, kParams, log_grid(1e-3, 10.0, 400));
    std::size_t checked = 0;
    for (const auto& pt : chart.points) {
        if (pt.branch > 1) continue;
        const Complex s(0.0, pt.omega);
        const Complex H = characteristic_fn(s, pt.alpha, pt.k_b, 0.8, kParams);
        const double scale = std::pow(pt.omega, 3) + (pt.alpha + pt.k_b + 1) * pt.omega + 1;
        CHECK(std::abs(H) < 1e-9 * scale);
        ++checked;
    }
    CHECK(checked > 0);
    for (const auto& c : chart.curve) {
        const double P = c.P, Q = c.Q;
        CHECK(std::isfinite(P));
        CHECK(std::isfinite(Q));
    }
}

TEST_CASE("boundary crossings agree with the spectral oracle", "[stability]") {
    const auto omegas = default_omega_grid();
    for (double tau : {0.0, 0.8, 1.6, 2.4, 3.2}) {
        const auto chart = stability_boundary(tau, kParams, omegas);
        const auto cells = classify_grid(tau, kParams, 2.0, 2.0, 20);
        std::size_t agree = 0;
        for (const auto& c : cells) agree += classify_by_boundary(chart, kParams, c.alpha, c.k_b) == c.stable;
        INFO("tau = " << tau);
        CHECK(agree == cells.size());
    }
}

TEST_CASE("stable area shrinks with the delay", "[stability][property]") {
    auto count = [](double tau) {
        std::size_t n = 0;
        for (const auto& c : classify_grid(tau, kParams, 2.0, 2.0, 20)) n += c.stable;
        return n;
    };
    const std::size_t c0 = count(0.0), c08 = count(0.8), c16 = count(1.6), c24 = count(2.4), c32 = count(3.2);
    CHECK(c0 == 400);
    CHECK(c0 > c08);
    CHECK(c08 > c16);
    CHECK(c16 >= c24);
    CHECK(c32 == 0);
    CHECK(c08 == 47);
    CHECK(c16 == 3);
}

TEST_CASE("stability argument validation", "[stability]") {
    CHECK_THROWS_AS(stability_boundary(-1.0, kParams, default_omega_grid()), InvalidArgument);
    CHECK_THROWS_AS(stability_boundary(1.0, kParams, {1.0, 0.5}), InvalidArgument);
    CHECK_THROWS_AS(stability_boundary(1.0, kParams, default_omega_grid(), CharacteristicForm::published, 0.0),
                    InvalidArgument);
    CHECK_THROWS_AS(log_grid(0.0, 1.0, 10), InvalidArgument);
    CHECK_THROWS_AS(classify_grid(1.0, kParams, 2.0, 2.0, 0), InvalidArgument);
    CHECK(characteristic_form_from_string("linearized") == CharacteristicForm::linearized);
    CHECK_FALSE(characteristic_form_from_string("exact"));
}
