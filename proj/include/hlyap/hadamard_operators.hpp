#pragma once

// Numerical Hadamard fractional integral and derivative.
//
// With u = ln(s/t1) and x = ln(t/t1) the Hadamard integral becomes a
// Riemann-Liouville integral in the log variable:
//
//   (I^α f)(t) = (1/Γ(α)) ∫_0^x (x − u)^(α−1) g(u) du,   g(u) = f(t1·e^u).
//
// Every routine comes in two flavours: `*_log` takes g as a function of the
// log variable (needed when g is singular at u = 0, since s = t1·e^u cannot
// resolve u below machine epsilon), the plain one takes f as a function of t.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>

#include "hlyap/errors.hpp"
#include "hlyap/quadrature.hpp"
#include "hlyap/special_functions.hpp"

namespace hlyap {

struct QuadratureConfig {
    std::size_t panels = 64;  // graded panels on [0, x]
    std::size_t order = 8;    // Gauss points per panel
    // u_k = x(1 − (1 − k/P)^grading). Values above 1 shrink the panels next to
    // u = x, which leaves each neighbour wider than its distance to the
    // kernel singularity; since the terminal panel is exact in the kernel
    // weight, the uniform mesh is the accurate default.
    double grading = 1.0;

    void validate() const {
        if (panels < 1) throw Error(ErrorKind::DomainInvalid, "QuadratureConfig.panels must be >= 1");
        if (order < 2) throw Error(ErrorKind::DomainInvalid, "QuadratureConfig.order must be >= 2");
        if (!(grading >= 1.0) || !std::isfinite(grading)) {
            throw Error(ErrorKind::DomainInvalid, "QuadratureConfig.grading must be >= 1");
        }
    }
};

namespace detail {

inline double finite_or_throw(double v) {
    if (!std::isfinite(v)) throw Error(ErrorKind::QuadratureFailure, "integrand produced a non-finite value");
    return v;
}

// ∫_0^x (x − u)^(α−1) g(u) du (without the 1/Γ(α) factor).
//
// Panels follow the graded mesh; the last panel uses a Gauss-Jacobi rule for
// the kernel's endpoint behaviour, and the first panel is split into
// geometric layers shrinking toward u = 0 (ratio 0.5) until their
// contribution is negligible or u drops below `u_floor`.
template <class G>
double rl_integral(double alpha, G&& g, double x, const QuadratureConfig& cfg, double u_floor) {
    const std::size_t P = cfg.panels;
    const double a = alpha - 1.0;
    const quad::Rule& legendre = quad::gauss_legendre(cfg.order);
    const quad::Rule jacobi = a == 0.0 ? legendre : quad::gauss_jacobi(cfg.order, a, 0.0);

    auto node = [&](std::size_t k) {
        if (k == P) return x;
        return x * (1.0 - std::pow(1.0 - static_cast<double>(k) / static_cast<double>(P), cfg.grading));
    };
    auto weighted = [&](double u) { return finite_or_throw(std::pow(x - u, a) * g(u)); };
    auto plain = [&](double u) { return finite_or_throw(g(u)); };

    // Terminal panel, exact in the kernel weight.
    const double terminal_lo = P == 1 ? 0.0 : node(P - 1);
    double sum = quad::apply_right_singular(jacobi, a, plain, terminal_lo, x);
    if (P == 1) return sum;

    for (std::size_t k = P - 1; k-- > 1;) sum += quad::apply(legendre, weighted, node(k), node(k + 1));

    // First panel [0, u1] as geometric layers [u1 r^(j+1), u1 r^j].
    constexpr double ratio = 0.5;
    constexpr int max_layers = 1200;
    double hi = node(1);
    double layers = 0.0;
    for (int j = 0; j < max_layers; ++j) {
        const double lo = hi * ratio;
        const double c = quad::apply(legendre, weighted, lo, hi);
        layers += c;
        hi = lo;
        if (hi < u_floor) break;
        if (j >= 3 && std::fabs(c) <= 1e-17 * (std::fabs(sum + layers) + std::numeric_limits<double>::min())) break;
    }
    return sum + layers;
}

}  // namespace detail

/// Hadamard integral of order α ≥ 0 at log-position x ≥ 0 for g given in
/// the log variable. Order 0 returns g(x).
template <class G>
double hadamard_integral_log(double order, G&& g, double x, const QuadratureConfig& cfg = {}) {
    cfg.validate();
    if (!(order >= 0.0) || !std::isfinite(order)) {
        throw Error(ErrorKind::DomainInvalid, "integral order must be finite and >= 0");
    }
    if (!(x >= 0.0) || !std::isfinite(x)) throw Error(ErrorKind::DomainInvalid, "log-position must be >= 0");
    if (order == 0.0) return g(x);
    if (x == 0.0) return 0.0;
    return detail::rl_integral(order, g, x, cfg, 0.0) / gamma(order);
}

/// (1/Γ(α)) ∫_{t1}^{t} (ln(t/s))^(α−1) f(s) ds/s.
template <class F>
double hadamard_integral(double order, F&& f, double t1, double t, const QuadratureConfig& cfg = {}) {
    if (!(t1 > 0.0) || !(t >= t1) || !std::isfinite(t)) {
        throw Error(ErrorKind::DomainInvalid, "hadamard_integral requires 0 < t1 <= t");
    }
    cfg.validate();
    if (!(order >= 0.0) || !std::isfinite(order)) {
        throw Error(ErrorKind::DomainInvalid, "integral order must be finite and >= 0");
    }
    if (order == 0.0) return f(t);
    const double x = std::log(t / t1);
    if (x == 0.0) return 0.0;
    auto g = [&](double u) { return f(t1 * std::exp(u)); };
    // Below a few ulps s = t1·e^u no longer moves.
    const double floor = 4.0 * std::numeric_limits<double>::epsilon();
    return detail::rl_integral(order, g, x, cfg, floor) / gamma(order);
}

struct DerivativeEstimate {
    double value;
    double error;
};

namespace detail {

// Ridders' extrapolation of a centered difference of order 1 or 2 in the
// log variable, with the starting step capped so that x − h stays ≥ 0.
template <class F>
DerivativeEstimate ridders(F&& fn, double x, int n_diff) {
    constexpr int ntab = 12;
    constexpr double con = 1.4, con2 = con * con, safe = 2.0;
    double h = std::min(0.2, 0.5 * x);
    const double f0 = n_diff == 2 ? fn(x) : 0.0;
    auto diff = [&](double step) {
        const double fp = fn(x + step), fm = fn(x - step);
        return n_diff == 1 ? (fp - fm) / (2.0 * step) : (fp - 2.0 * f0 + fm) / (step * step);
    };
    std::array<std::array<double, ntab>, ntab> a{};
    a[0][0] = diff(h);
    DerivativeEstimate best{a[0][0], std::numeric_limits<double>::infinity()};
    for (int i = 1; i < ntab; ++i) {
        h /= con;
        a[0][i] = diff(h);
        double fac = con2;
        for (int j = 1; j <= i; ++j) {
            a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
            fac *= con2;
            const double errt = std::max(std::fabs(a[j][i] - a[j - 1][i]), std::fabs(a[j][i] - a[j - 1][i - 1]));
            if (errt <= best.error) best = {a[j][i], errt};
        }
        if (std::fabs(a[i][i] - a[i - 1][i - 1]) >= safe * best.error) break;
    }
    return best;
}

}  // namespace detail

inline constexpr double kDerivativeRelTol = 1e-6;

/// Hadamard derivative of order α ∈ (0, 2] at log-position x > 0:
/// δ^n (I^{n−α} g), n = ⌈α⌉, with δ = d/dx in the log variable. For α = n
/// this is δ^n g. Throws DifferenceInstability when the extrapolation error
/// estimate exceeds kDerivativeRelTol·max(1, |value|).
template <class G>
DerivativeEstimate hadamard_derivative_log_estimate(double order, G&& g, double x, const QuadratureConfig& cfg = {}) {
    cfg.validate();
    if (!(order > 0.0 && order <= 2.0)) throw Error(ErrorKind::DomainInvalid, "derivative order must lie in (0, 2]");
    if (!(x > 0.0) || !std::isfinite(x)) throw Error(ErrorKind::DomainInvalid, "derivative needs t > t1");
    const int n = order <= 1.0 ? 1 : 2;
    const double inner = static_cast<double>(n) - order;
    auto F = [&](double y) { return inner == 0.0 ? g(y) : hadamard_integral_log(inner, g, y, cfg); };
    const DerivativeEstimate est = detail::ridders(F, x, n);
    if (!(est.error <= kDerivativeRelTol * std::max(1.0, std::fabs(est.value)))) {
        throw Error(ErrorKind::DifferenceInstability,
                    "difference estimate error " + std::to_string(est.error) + " above tolerance");
    }
    return est;
}

template <class G>
double hadamard_derivative_log(double order, G&& g, double x, const QuadratureConfig& cfg = {}) {
    return hadamard_derivative_log_estimate(order, g, x, cfg).value;
}

template <class F>
double hadamard_derivative(double order, F&& f, double t1, double t, const QuadratureConfig& cfg = {}) {
    if (!(t1 > 0.0) || !(t > t1) || !std::isfinite(t)) {
        throw Error(ErrorKind::DomainInvalid, "hadamard_derivative requires 0 < t1 < t");
    }
    auto g = [&](double u) { return f(t1 * std::exp(u)); };
    return hadamard_derivative_log(order, g, std::log(t / t1), cfg);
}

enum class PowerRuleOp { Integral, Derivative };

/// Closed forms for the power function (ln(t/t1))^(κ−1):
///   I^σ → Γ(κ)/Γ(κ+σ) (ln(t/t1))^(κ+σ−1)
///   D^σ → Γ(κ)/Γ(κ−σ) (ln(t/t1))^(κ−σ−1),  1/Γ at poles taken as 0.
inline double power_rule_reference(PowerRuleOp op, double order, double exponent_kappa, double t1, double t) {
    if (!(order > 0.0) || !(exponent_kappa > 0.0) || !std::isfinite(order) || !std::isfinite(exponent_kappa)) {
        throw Error(ErrorKind::DomainInvalid, "power rule needs order > 0 and exponent > 0");
    }
    if (!(t1 > 0.0) || !(t >= t1)) throw Error(ErrorKind::DomainInvalid, "power rule needs 0 < t1 <= t");
    const double x = std::log(t / t1);
    if (op == PowerRuleOp::Integral) {
        return gamma(exponent_kappa) / gamma(exponent_kappa + order) * std::pow(x, exponent_kappa + order - 1.0);
    }
    const double rg = reciprocal_gamma(exponent_kappa - order);
    if (rg == 0.0) return 0.0;
    const double e = exponent_kappa - order - 1.0;
    if (x == 0.0 && e < 0.0) throw Error(ErrorKind::DomainInvalid, "power rule derivative singular at t = t1");
    return gamma(exponent_kappa) * rg * std::pow(x, e);
}

/// (I^σ I^κ g)(x) and (I^{σ+κ} g)(x) in the log variable.
template <class G>
std::pair<double, double> composition_check_log(double sigma, double kappa, G&& g, double x,
                                                const QuadratureConfig& cfg = {}) {
    if (!(sigma >= 0.0) || !(kappa >= 0.0)) throw Error(ErrorKind::DomainInvalid, "orders must be >= 0");
    auto inner = [&](double u) { return hadamard_integral_log(kappa, g, u, cfg); };
    return {hadamard_integral_log(sigma, inner, x, cfg), hadamard_integral_log(sigma + kappa, g, x, cfg)};
}

template <class F>
std::pair<double, double> composition_check(double sigma, double kappa, F&& f, double t1, double t,
                                            const QuadratureConfig& cfg = {}) {
    if (!(t1 > 0.0) || !(t >= t1)) throw Error(ErrorKind::DomainInvalid, "composition_check needs 0 < t1 <= t");
    auto g = [&](double u) { return f(t1 * std::exp(u)); };
    return composition_check_log(sigma, kappa, g, std::log(t / t1), cfg);
}

}  // namespace hlyap
