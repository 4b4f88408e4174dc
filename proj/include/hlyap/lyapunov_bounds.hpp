#pragma once

// Lyapunov-type bound  ∫|q| ≥ Γ(σ−κ)/max{Ω,℧}  and the nonexistence tests
// built on it.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "hlyap/coefficient.hpp"
#include "hlyap/errors.hpp"
#include "hlyap/green_kernel.hpp"
#include "hlyap/params.hpp"
#include "hlyap/quadrature.hpp"
#include "hlyap/special_functions.hpp"

namespace hlyap {

inline constexpr double kDefaultQuadratureTol = 1e-9;

/// Γ(σ−κ) / max{Ω, ℧}.
inline double lyapunov_bound(const FracParams& p) {
    return gamma(p.sigma() - p.kappa()) / std::max(omega(p), mho(p));
}

/// lyapunov_bound(p)·(t2 − t1), the eigenvalue threshold for
/// D^σ x + λ D^κ x = 0 in its published form.
inline double eigenvalue_bound(const FracParams& p) { return lyapunov_bound(p) * (p.t2() - p.t1()); }

/// lyapunov_bound(p)/(t2 − t1): what the integral inequality gives when q ≡ λ,
/// since then ∫|q| = |λ|(t2 − t1).
inline double constant_coefficient_bound(const FracParams& p) { return lyapunov_bound(p) / (p.t2() - p.t1()); }

struct LyapunovReport {
    double gamma_sk;
    double omega;
    double mho;
    double x2;
    double delta;
    double bound;
    double eigen_bound;
    std::optional<double> q_integral;
    std::optional<Verdict> verdict;
};

inline LyapunovReport lyapunov_report(const FracParams& p) {
    const GreenMaxReport g = green_max(p);
    LyapunovReport r{};
    r.gamma_sk = g.gamma_sk;
    r.omega = g.omega;
    r.mho = g.mho;
    r.x2 = g.x2;
    r.delta = g.delta;
    r.bound = g.gamma_sk / std::max(g.omega, g.mho);
    r.eigen_bound = r.bound * (p.t2() - p.t1());
    return r;
}

namespace detail {

// Locates a root of q inside (lo, hi) given a sign change, to 1e-12 relative.
template <class F>
double bisect_root(F&& q, double lo, double hi, double q_lo) {
    for (int it = 0; it < 200 && (hi - lo) > 1e-12 * std::max(1.0, std::fabs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double q_mid = q(mid);
        if (q_mid == 0.0) return mid;
        if ((q_mid < 0.0) == (q_lo < 0.0)) {
            lo = mid;
            q_lo = q_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

/// ∫_{t1}^{t2} |q(t)| dt to an absolute tolerance `tol`. The interval is cut
/// at table knots and at sign changes of q (found on a 256-panel scan and
/// refined by bisection), then each piece is integrated adaptively.
template <class F>
double integrate_abs_q(F&& q, double t1, double t2, double tol, const std::vector<double>& breakpoints = {}) {
    if (!(tol > 0.0)) throw Error(ErrorKind::DomainInvalid, "quadrature tolerance must be positive");
    if (!(t2 > t1)) throw Error(ErrorKind::DomainInvalid, "integration interval must satisfy t1 < t2");

    std::vector<double> cuts{t1};
    std::vector<double> knots = breakpoints;
    std::sort(knots.begin(), knots.end());
    for (double k : knots) {
        if (k > t1 && k < t2) cuts.push_back(k);
    }
    cuts.push_back(t2);

    constexpr std::size_t scan = 256;
    std::vector<double> pieces{t1};
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const double a = cuts[c], b = cuts[c + 1];
        double prev_t = a, prev_q = q(a);
        for (std::size_t k = 1; k <= scan; ++k) {
            const double t = k == scan ? b : a + (b - a) * static_cast<double>(k) / scan;
            const double qt = q(t);
            if ((prev_q < 0.0 && qt > 0.0) || (prev_q > 0.0 && qt < 0.0)) {
                pieces.push_back(detail::bisect_root(q, prev_t, t, prev_q));
            } else if (qt == 0.0 && k < scan) {
                pieces.push_back(t);
            }
            prev_t = t;
            prev_q = qt;
        }
        pieces.push_back(b);
    }
    pieces.erase(std::unique(pieces.begin(), pieces.end()), pieces.end());

    const double total = t2 - t1;
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < pieces.size(); ++k) {
        const double a = pieces[k], b = pieces[k + 1];
        if (!(b > a)) continue;
        const double share = std::max(tol * (b - a) / total, 1e-15 * tol);
        sum += quad::integrate_adaptive([&](double t) { return std::fabs(q(t)); }, a, b, share).value;
    }
    return sum;
}

inline double integrate_abs_q(const Coefficient& q, double t1, double t2, double tol) {
    return integrate_abs_q([&](double t) { return q(t); }, t1, t2, tol, q.breakpoints(t1, t2));
}

/// Nonexistence test: NoNontrivialSolution iff ∫|q| < bound.
inline Verdict nonexistence_check(const FracParams& p, const Coefficient& q, double tol = kDefaultQuadratureTol) {
    bind_to_interval(q, p.t1(), p.t2());
    const double integral = integrate_abs_q(q, p.t1(), p.t2(), tol);
    return Verdict::from(integral, lyapunov_bound(p));
}

/// Eigenvalue form: NoNontrivialSolution iff |λ| < eigenvalue_bound(p).
/// The compared quantity |λ| is stored in `q_integral`.
inline Verdict lambda_nonexistence_check(const FracParams& p, double lambda) {
    if (lambda == 0.0) throw Error(ErrorKind::ZeroLambda, "lambda must be nonzero");
    if (!std::isfinite(lambda)) throw Error(ErrorKind::DomainInvalid, "lambda must be finite");
    return Verdict::from(std::fabs(lambda), eigenvalue_bound(p));
}

/// The single-derivative (κ = 0) bound
///   Γ(σ)·ϱ·(ln(ϱ/t1)·ln(t2/ϱ)/L)^(1−σ),
///   ϱ = exp(½[2(σ−1) + ln(t1 t2) − √(4(σ−1)² + L²)]),
/// used only to cross-check the κ → 0 limit of lyapunov_bound.
inline double reference_bound_kappa0_point(double sigma, double t1, double t2) {
    const double L = std::log(t2 / t1);
    const double s1 = sigma - 1.0;
    return std::exp(0.5 * (2.0 * s1 + std::log(t1 * t2) - std::sqrt(4.0 * s1 * s1 + L * L)));
}

inline double reference_bound_kappa0(double sigma, double t1, double t2) {
    if (!std::isfinite(sigma) || !(sigma > 1.0 && sigma <= 2.0)) {
        throw Error(ErrorKind::OrderOutOfRange, "reference bound needs 1 < sigma <= 2");
    }
    if (!(t1 > 0.0) || !(t2 > t1) || !std::isfinite(t2)) {
        throw Error(ErrorKind::DomainInvalid, "reference bound needs 0 < t1 < t2");
    }
    const double L = std::log(t2 / t1);
    const double rho = reference_bound_kappa0_point(sigma, t1, t2);
    const double ratio = std::log(rho / t1) * std::log(t2 / rho) / L;
    return gamma(sigma) * rho * std::pow(ratio, 1.0 - sigma);
}

}  // namespace hlyap
