#pragma once

// Linear stability of the delayed DOB-CBF closed loop
//
//   z' = F(z, z_tau, r, r_tau) + p_z(z, w),   z = [x, xi]
//   F  = [ f(x,r) + g(x) k(z_tau, r_tau) ;  f_xi(x, k(z, r), r, xi) ]
//
// around an equilibrium, and stability charts in the (alpha, k_b) plane.
// Only the plant channel is delayed; the observer uses the current command.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "errors.hpp"
#include "observer.hpp"
#include "plant.hpp"
#include "safety_controller.hpp"
#include "vehicle_model.hpp"

namespace dobcbf {

using Complex = std::complex<double>;

/// Which closed form of the truck characteristic function to use.
///  published:  (s^3 + 2cv* s^2) e^{s tau} + (P + kappa) s^2 + (P kappa + Q) s + Q kappa
///  linearized: same with (P + kappa - 2cv*) s^2, the exact linearization of the
///              delayed controller including its c v^2 drag compensation.
/// P = alpha + k_b, Q = alpha k_b.
enum class CharacteristicForm { published, linearized };

inline std::string_view to_string(CharacteristicForm f) {
    return f == CharacteristicForm::published ? "published" : "linearized";
}

inline std::optional<CharacteristicForm> characteristic_form_from_string(std::string_view s) {
    if (s == "published") return CharacteristicForm::published;
    if (s == "linearized") return CharacteristicForm::linearized;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Closed-loop field and equilibrium

template <std::size_t N>
using AugVec = Eigen::Matrix<double, static_cast<int>(N + 1), 1>;

/// F(z, z_tau, r, r_tau) + p_z(z, w) for the dob controller.
template <DisturbedPlant P>
AugVec<P::kDim> delayed_closed_loop_field(const P& plant, const ControllerConfig& ctrl,
                                          const ObserverConfig& obs, const AugVec<P::kDim>& z,
                                          const AugVec<P::kDim>& z_tau, double r, double r_tau,
                                          double w) {
    constexpr std::size_t N = P::kDim;
    typename P::State x{}, x_tau{};
    for (std::size_t i = 0; i < N; ++i) {
        x[i] = z(static_cast<int>(i));
        x_tau[i] = z_tau(static_cast<int>(i));
    }
    const ObserverState xi{z(N)};
    const ObserverState xi_tau{z_tau(N)};

    const double u_tau = dob_control(plant, x_tau, {r_tau, 0.0}, xi_tau, ctrl, obs.k_b);
    const double u_now = dob_control(plant, x, {r, 0.0}, xi, ctrl, obs.k_b);
    const auto xdot = plant.drift(x, r) + u_tau * plant.input_gain(x) + plant.disturbance(x, w);

    AugVec<N> out;
    for (std::size_t i = 0; i < N; ++i) out(static_cast<int>(i)) = xdot[i];
    out(N) = xi_rate(plant, x, u_now, {r, 0.0}, xi, obs.k_b);
    return out;
}

/// z* = (D*, v*, xi*) in closed form: v* = r*, h* = sigma/alpha and
/// b_hat* = b(x*, 0) (rolling resistance remains at zero grade).
inline AugVec<2> truck_equilibrium(const TruckParams& p, const ControllerConfig& ctrl,
                                   const ObserverConfig& obs, double r_star) {
    const double h_star = ctrl.sigma / ctrl.alpha;
    const double v = r_star;
    const double D = p.D_sf + p.T * v + h_star;
    const double b_star = disturbance_effect({D, v}, 0.0, p);
    return {D, v, obs.k_b * h_star - b_star};
}

struct Equilibrium {
    Eigen::VectorXd z;
    double residual = 0.0;  // inf-norm of the undelayed field at z
    int iterations = 0;
};

namespace detail {

inline double fd_step(double v) { return 1e-6 * std::max(1.0, std::abs(v)); }

}  // namespace detail

/// Root of the undelayed closed-loop field (z_tau = z, r = r*, w = 0) by
/// Newton iteration with a central-difference Jacobian.
template <DisturbedPlant P>
Equilibrium find_equilibrium(const P& plant, const ControllerConfig& ctrl,
                             const ObserverConfig& obs, double r_star,
                             const AugVec<P::kDim>& guess) {
    constexpr int M = static_cast<int>(P::kDim + 1);
    auto G = [&](const AugVec<P::kDim>& z) {
        return delayed_closed_loop_field(plant, ctrl, obs, z, z, r_star, r_star, 0.0);
    };
    AugVec<P::kDim> z = guess;
    Equilibrium eq;
    for (int it = 0; it < 50; ++it) {
        const AugVec<P::kDim> g = G(z);
        eq.residual = g.cwiseAbs().maxCoeff();
        eq.iterations = it;
        if (eq.residual < 1e-12) break;
        Eigen::Matrix<double, M, M> J;
        for (int j = 0; j < M; ++j) {
            const double hstep = detail::fd_step(z(j));
            AugVec<P::kDim> zp = z, zm = z;
            zp(j) += hstep;
            zm(j) -= hstep;
            J.col(j) = (G(zp) - G(zm)) / (2 * hstep);
        }
        z -= J.fullPivLu().solve(g);
        if (!z.allFinite()) throw InvalidArgument("find_equilibrium: Newton diverged");
    }
    eq.residual = G(z).cwiseAbs().maxCoeff();
    if (!(eq.residual < 1e-10))
        throw InvalidArgument("find_equilibrium: no convergence (residual " +
                              std::to_string(eq.residual) + ")");
    eq.z = z;
    return eq;
}

/// Truck equilibrium: Newton started from the closed form.
inline Equilibrium find_equilibrium(const TruckModel& truck, const ControllerConfig& ctrl,
                                    const ObserverConfig& obs) {
    const double r_star = truck.params().v_star;
    return find_equilibrium(truck, ctrl, obs, r_star,
                            truck_equilibrium(truck.params(), ctrl, obs, r_star));
}

// ---------------------------------------------------------------------------
// Linearization

struct LinearizedModel {
    Eigen::MatrixXd A;       // d(F + p_z)/dz
    Eigen::MatrixXd A_tau;   // dF/dz_tau
    Eigen::VectorXd B_w;     // dp_z/dw
    Eigen::VectorXd B_r;     // dF/dr
    Eigen::VectorXd B_rtau;  // dF/dr_tau
    Eigen::VectorXd z_star;
    double r_star = 0.0;
    double tau = 0.0;
};

/// Central finite differences (step 1e-6 scaled per component) of the
/// delayed closed-loop field at (z*, z*, r*, r*, w = 0).
template <DisturbedPlant P>
LinearizedModel linearize(const P& plant, const ControllerConfig& ctrl, const ObserverConfig& obs,
                          const Eigen::VectorXd& z_star, double r_star, double tau) {
    constexpr int M = static_cast<int>(P::kDim + 1);
    if (z_star.size() != M) throw InvalidArgument("linearize: equilibrium has wrong dimension");
    if (!(tau >= 0)) throw InvalidArgument("linearize: tau must be >= 0");
    const AugVec<P::kDim> zs = z_star;

    auto field = [&](const AugVec<P::kDim>& z, const AugVec<P::kDim>& zt, double r, double rt,
                     double w) { return delayed_closed_loop_field(plant, ctrl, obs, z, zt, r, rt, w); };

    LinearizedModel lm;
    lm.A.resize(M, M);
    lm.A_tau.resize(M, M);
    for (int j = 0; j < M; ++j) {
        const double hstep = detail::fd_step(zs(j));
        AugVec<P::kDim> zp = zs, zm = zs;
        zp(j) += hstep;
        zm(j) -= hstep;
        lm.A.col(j) = (field(zp, zs, r_star, r_star, 0.0) - field(zm, zs, r_star, r_star, 0.0)) /
                      (2 * hstep);
        lm.A_tau.col(j) =
            (field(zs, zp, r_star, r_star, 0.0) - field(zs, zm, r_star, r_star, 0.0)) / (2 * hstep);
    }
    const double hr = detail::fd_step(r_star);
    const double hw = 1e-6;
    lm.B_r = (field(zs, zs, r_star + hr, r_star, 0.0) - field(zs, zs, r_star - hr, r_star, 0.0)) /
             (2 * hr);
    lm.B_rtau =
        (field(zs, zs, r_star, r_star + hr, 0.0) - field(zs, zs, r_star, r_star - hr, 0.0)) /
        (2 * hr);
    lm.B_w = (field(zs, zs, r_star, r_star, hw) - field(zs, zs, r_star, r_star, -hw)) / (2 * hw);

    if (!lm.A.allFinite() || !lm.A_tau.allFinite() || !lm.B_r.allFinite() ||
        !lm.B_rtau.allFinite() || !lm.B_w.allFinite())
        throw InvalidArgument("linearize: non-finite Jacobian entries");
    lm.z_star = z_star;
    lm.r_star = r_star;
    lm.tau = tau;
    return lm;
}

/// det(sI - A - A_tau e^{-s tau}).
inline Complex characteristic_det(const LinearizedModel& lm, Complex s) {
    const auto n = lm.A.rows();
    const Eigen::MatrixXcd M = s * Eigen::MatrixXcd::Identity(n, n) - lm.A.cast<Complex>() -
                               std::exp(-s * lm.tau) * lm.A_tau.cast<Complex>();
    return M.determinant();
}

/// Closed-form A and A_tau of the truck loop at any equilibrium with v* = params.v_star.
/// The `published` form drops the delayed drag-compensation derivative.
inline void truck_delay_matrices(double alpha, double k_b, const TruckParams& p,
                                 CharacteristicForm form, Eigen::Matrix3d& A,
                                 Eigen::Matrix3d& A_tau) {
    const double kappa = p.kappa();
    const double a = 2 * p.c * p.v_star;
    const double P = alpha + k_b;
    const double Q = alpha * k_b;
    A << 0, -1, 0,
         0, -a, 0,
         -Q, Q * p.T, 0;
    A_tau << 0, 0, 0,
             P * kappa, -P - kappa + (form == CharacteristicForm::linearized ? a : 0.0), -kappa,
             0, 0, 0;
}

// ---------------------------------------------------------------------------
// Characteristic function and stability charts

inline Complex characteristic_fn(Complex s, double alpha, double k_b, double tau,
                                 const TruckParams& p,
                                 CharacteristicForm form = CharacteristicForm::published) {
    const double kappa = p.kappa();
    const double a = 2 * p.c * p.v_star;
    const double delta = form == CharacteristicForm::linearized ? a : 0.0;
    const double P = alpha + k_b;
    const double Q = alpha * k_b;
    const Complex s2 = s * s;
    return (s2 * s + a * s2) * std::exp(s * tau) + (P + kappa - delta) * s2 +
           (P * kappa + Q) * s + Q * kappa;
}

struct CriticalDelay {
    double omega_cr = 0.0;
    double tau_cr = 0.0;        // arcsin(Omega_cr/kappa)/Omega_cr, the published closed form
    double tau_crossing = 0.0;  // (pi - arcsin(Omega_cr/kappa))/Omega_cr, where the roots cross
};

/// Critical delay of the published form (alpha = k_b = 0 limit):
/// Omega_cr = sqrt(kappa^2 - 4c^2 v*^2).
inline CriticalDelay critical_delay(const TruckParams& p) {
    const double kappa = p.kappa();
    const double a = 2 * p.c * p.v_star;
    if (!(kappa * kappa > a * a))
        throw InvalidArgument("critical_delay: requires kappa^2 > 4 c^2 v*^2");
    CriticalDelay cd;
    cd.omega_cr = std::sqrt(kappa * kappa - a * a);
    const double phase = std::asin(std::min(1.0, cd.omega_cr / kappa));
    cd.tau_cr = phase / cd.omega_cr;
    cd.tau_crossing = (std::numbers::pi - phase) / cd.omega_cr;
    return cd;
}

/// Smallest delay at which the alpha = k_b = 0 limit of `form` has roots on
/// the imaginary axis: (j Omega + a) e^{j Omega tau} = -beta.
inline double crossing_delay(const TruckParams& p, CharacteristicForm form) {
    const double a = 2 * p.c * p.v_star;
    const double beta = p.kappa() - (form == CharacteristicForm::linearized ? a : 0.0);
    if (!(beta * beta > a * a)) throw InvalidArgument("crossing_delay: no crossing frequency");
    const double omega = std::sqrt(beta * beta - a * a);
    return (std::numbers::pi - std::asin(std::min(1.0, omega / beta))) / omega;
}

struct BoundaryPoint {
    double omega;
    double alpha;
    double k_b;
    int branch;  // 0: alpha >= k_b, 1: alpha <= k_b, 2: alpha = 0 axis, 3: k_b = 0 axis
};

/// Solution of H(j Omega) = 0 in symmetric-function coordinates.
struct SymmetricPoint {
    double omega;
    double P;  // alpha + k_b
    double Q;  // alpha k_b
};

struct StabilityChart {
    double tau = 0.0;
    CharacteristicForm form = CharacteristicForm::published;
    double alpha_max = 2.0;
    double kb_max = 2.0;
    std::vector<SymmetricPoint> curve;   // every Omega on the grid, in order
    std::vector<BoundaryPoint> points;   // real, positive (alpha, k_b) pairs + axes
    std::vector<double> gaps;            // Omega values with a singular 2x2 system
};

/// Log-spaced grid on [lo, hi].
inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0) || !(hi > lo) || n < 2) throw InvalidArgument("log_grid: need 0 < lo < hi, n >= 2");
    std::vector<double> g(n);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(n - 1));
    return g;
}

inline std::vector<double> default_omega_grid() { return log_grid(1e-4, 10.0, 2000); }

/// Solve H(j Omega) = 0 for (P, Q). Real and imaginary parts are linear:
///   -Omega^2 P + kappa Q = a Omega^2 C - Omega^3 S + (kappa - delta) Omega^2
///   kappa Omega P + Omega Q = a Omega^2 S + Omega^3 C
/// with C = cos(Omega tau), S = sin(Omega tau).
inline std::optional<SymmetricPoint> solve_boundary_point(double omega, double tau,
                                                          const TruckParams& p,
                                                          CharacteristicForm form) {
    const double kappa = p.kappa();
    const double a = 2 * p.c * p.v_star;
    const double delta = form == CharacteristicForm::linearized ? a : 0.0;
    const double C = std::cos(omega * tau), S = std::sin(omega * tau);
    const double w2 = omega * omega, w3 = w2 * omega;
    Eigen::Matrix2d M;
    M << -w2, kappa,
         kappa * omega, omega;
    const Eigen::Vector2d rhs(a * w2 * C - w3 * S + (kappa - delta) * w2, a * w2 * S + w3 * C);
    const double det = M.determinant();
    if (std::abs(det) < 1e-14 * (1.0 + w3)) return std::nullopt;
    const Eigen::Vector2d pq = M.partialPivLu().solve(rhs);
    return SymmetricPoint{omega, pq(0), pq(1)};
}

/// Stability boundaries for fixed tau by D-subdivision. Both roots of
/// lambda^2 - P lambda + Q are emitted since (alpha, k_b) is unordered; the
/// Omega = 0 boundaries alpha = 0 and k_b = 0 are emitted as branches 2/3.
inline StabilityChart stability_boundary(double tau, const TruckParams& p,
                                         const std::vector<double>& omegas,
                                         CharacteristicForm form = CharacteristicForm::published,
                                         double alpha_max = 2.0, double kb_max = 2.0) {
    if (!(tau >= 0)) throw InvalidArgument("stability_boundary: tau must be >= 0");
    if (!(alpha_max > 0) || !(kb_max > 0))
        throw InvalidArgument("stability_boundary: ranges must be > 0");
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        if (!(omegas[i] > 0)) throw InvalidArgument("stability_boundary: Omega grid must be > 0");
        if (i && !(omegas[i] > omegas[i - 1]))
            throw InvalidArgument("stability_boundary: Omega grid must be increasing");
    }
    StabilityChart chart;
    chart.tau = tau;
    chart.form = form;
    chart.alpha_max = alpha_max;
    chart.kb_max = kb_max;
    chart.points.push_back({0.0, 0.0, 0.0, 2});
    chart.points.push_back({0.0, 0.0, kb_max, 2});
    chart.points.push_back({0.0, 0.0, 0.0, 3});
    chart.points.push_back({0.0, alpha_max, 0.0, 3});

    for (double omega : omegas) {
        const auto sp = solve_boundary_point(omega, tau, p, form);
        if (!sp) {
            chart.gaps.push_back(omega);
            continue;
        }
        chart.curve.push_back(*sp);
        const double disc = sp->P * sp->P - 4 * sp->Q;
        if (disc < 0) continue;
        const double root = std::sqrt(disc);
        const double hi = 0.5 * (sp->P + root);
        const double lo = 0.5 * (sp->P - root);
        if (!(lo > 0)) continue;
        chart.points.push_back({omega, hi, lo, 0});
        chart.points.push_back({omega, lo, hi, 1});
    }
    return chart;
}

namespace detail {

inline double cross2(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

// Intersection of segments p0-p1 and q0-q1 as fractions (t along p, u along
// q); half-open in u so a shared vertex counts once.
inline std::optional<std::pair<double, double>> segment_intersection(
    double p0x, double p0y, double p1x, double p1y, double q0x, double q0y, double q1x,
    double q1y) {
    const double rx = p1x - p0x, ry = p1y - p0y;
    const double sx = q1x - q0x, sy = q1y - q0y;
    const double denom = cross2(rx, ry, sx, sy);
    if (denom == 0.0) return std::nullopt;
    const double qpx = q0x - p0x, qpy = q0y - p0y;
    const double t = cross2(qpx, qpy, sx, sy) / denom;
    const double u = cross2(qpx, qpy, rx, ry) / denom;
    if (t >= 0.0 && t <= 1.0 && u >= 0.0 && u < 1.0) return std::make_pair(t, u);
    return std::nullopt;
}

// dH/ds of the truck characteristic function.
inline Complex characteristic_fn_ds(Complex s, double P, double Q, double tau, const TruckParams& p,
                                    CharacteristicForm form) {
    const double kappa = p.kappa();
    const double a = 2 * p.c * p.v_star;
    const double delta = form == CharacteristicForm::linearized ? a : 0.0;
    const Complex e = std::exp(s * tau);
    return (3.0 * s * s + 2.0 * a * s) * e + tau * (s * s * s + a * s * s) * e +
           2.0 * (P + kappa - delta) * s + (P * kappa + Q);
}

}  // namespace detail

/// Number of characteristic roots in the open right half plane as the gains
/// tend to zero: 2 per imaginary-axis crossing of (s + a) e^{s tau} + beta
/// at delays below tau.
inline int corner_unstable_roots(double tau, const TruckParams& p, CharacteristicForm form) {
    const double a = 2 * p.c * p.v_star;
    const double beta = p.kappa() - (form == CharacteristicForm::linearized ? a : 0.0);
    const double omega = std::sqrt(beta * beta - a * a);
    const double first = crossing_delay(p, form);
    if (tau < first) return 0;
    return 2 * (1 + static_cast<int>(std::floor((tau - first) * omega / (2 * std::numbers::pi))));
}

/// Stability of (alpha, k_b) read off the chart. Walking the ray
/// mu (P, Q), mu in (0, 1], in the (P, Q) plane, every boundary crossing
/// moves a root pair across the imaginary axis; the direction follows from
/// Re(ds/dmu) = -Re(dH/dmu / dH/ds) at s = j Omega. Stable iff no roots
/// remain in the right half plane.
inline bool classify_by_boundary(const StabilityChart& chart, const TruckParams& p, double alpha,
                                 double k_b) {
    if (!(alpha > 0) || !(k_b > 0)) return false;
    const double P = alpha + k_b, Q = alpha * k_b;
    const double eps = 1e-9;
    int unstable = corner_unstable_roots(chart.tau, p, chart.form);
    double px = 0.0, py = 0.0, pw = 0.0;  // curve starts at the origin (Omega -> 0)
    for (const auto& c : chart.curve) {
        const auto hit = detail::segment_intersection(eps * P, eps * Q, P, Q, px, py, c.P, c.Q);
        if (hit) {
            const double mu = eps + (1.0 - eps) * hit->first;
            const Complex s(0.0, pw + hit->second * (c.omega - pw));
            const Complex dH_dmu = P * (s * s + p.kappa() * s) + Q * (s + p.kappa());
            const Complex dH_ds =
                detail::characteristic_fn_ds(s, mu * P, mu * Q, chart.tau, p, chart.form);
            unstable += (-(dH_dmu / dH_ds)).real() > 0 ? 2 : -2;
        }
        px = c.P;
        py = c.Q;
        pw = c.omega;
    }
    return unstable <= 0;
}

// ---------------------------------------------------------------------------
// Spectral stability oracle

/// Chebyshev differentiation matrix on x_j = cos(j pi / N), j = 0..N.
inline Eigen::MatrixXd chebyshev_differentiation(int N) {
    Eigen::VectorXd x(N + 1), c(N + 1);
    for (int j = 0; j <= N; ++j) {
        x(j) = std::cos(std::numbers::pi * j / N);
        c(j) = ((j == 0 || j == N) ? 2.0 : 1.0) * ((j % 2) ? -1.0 : 1.0);
    }
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(N + 1, N + 1);
    for (int i = 0; i <= N; ++i) {
        for (int j = 0; j <= N; ++j)
            if (i != j) D(i, j) = (c(i) / c(j)) / (x(i) - x(j));
        D(i, i) = -D.row(i).sum();
    }
    return D;
}

struct StabilityVerdict {
    bool stable = false;
    Complex rightmost;
};

/// Rightmost characteristic root of z' = A z + A_tau z(t - tau), by
/// collocating the solution operator's generator on N+1 Chebyshev nodes of
/// [-tau, 0]. tau = 0 reduces to the eigenvalues of A + A_tau.
inline StabilityVerdict rightmost_root(const Eigen::MatrixXd& A, const Eigen::MatrixXd& A_tau,
                                       double tau, int N) {
    if (N < 8) throw InvalidArgument("rightmost_root: collocation order must be >= 8");
    Eigen::VectorXcd ev;
    if (tau == 0.0) {
        ev = Eigen::EigenSolver<Eigen::MatrixXd>(A + A_tau, false).eigenvalues();
    } else {
        const int n = static_cast<int>(A.rows());
        const Eigen::MatrixXd D = chebyshev_differentiation(N) * (2.0 / tau);
        Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n * (N + 1), n * (N + 1));
        for (int i = 1; i <= N; ++i)
            for (int j = 0; j <= N; ++j)
                G.block(i * n, j * n, n, n) = D(i, j) * Eigen::MatrixXd::Identity(n, n);
        G.block(0, 0, n, n) = A;
        G.block(0, N * n, n, n) += A_tau;
        ev = Eigen::EigenSolver<Eigen::MatrixXd>(G, false).eigenvalues();
    }
    StabilityVerdict v;
    v.rightmost = ev(0);
    for (int i = 1; i < ev.size(); ++i)
        if (ev(i).real() > v.rightmost.real()) v.rightmost = ev(i);
    v.stable = v.rightmost.real() < -1e-9;
    return v;
}

inline StabilityVerdict is_stable(double alpha, double k_b, double tau, const TruckParams& p,
                                  int N = 32,
                                  CharacteristicForm form = CharacteristicForm::published) {
    Eigen::Matrix3d A, A_tau;
    truck_delay_matrices(alpha, k_b, p, form, A, A_tau);
    return rightmost_root(A, A_tau, tau, N);
}

struct GridCell {
    double alpha;
    double k_b;
    bool stable;
    double rightmost_re;
};

/// Spectral classification on the n x n grid {i alpha_max / n} x {j kb_max / n}, i, j = 1..n.
inline std::vector<GridCell> classify_grid(double tau, const TruckParams& p, double alpha_max,
                                           double kb_max, int n, int N = 32,
                                           CharacteristicForm form = CharacteristicForm::published) {
    if (n < 1) throw InvalidArgument("classify_grid: n must be >= 1");
    std::vector<GridCell> cells;
    cells.reserve(static_cast<std::size_t>(n * n));
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            const double al = alpha_max * i / n, kb = kb_max * j / n;
            const auto v = is_stable(al, kb, tau, p, N, form);
            cells.push_back({al, kb, v.stable, v.rightmost.real()});
        }
    return cells;
}

}  // namespace dobcbf
