#pragma once

// Gauss rules built by Golub-Welsch and an adaptive bisection integrator.
//
// All rules live on the reference interval [-1, 1]; the helpers below map
// them onto [lo, hi].

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "hlyap/errors.hpp"
#include "hlyap/special_functions.hpp"

namespace hlyap::quad {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }
};

namespace detail {

// Implicit QL on a symmetric tridiagonal matrix. On return `diag` holds the
// eigenvalues and `first` the first component of each normalized eigenvector.
inline void tridiagonal_ql(std::vector<double>& diag, std::vector<double> offdiag, std::vector<double>& first) {
    const std::size_t n = diag.size();
    first.assign(n, 0.0);
    first[0] = 1.0;
    offdiag.resize(n, 0.0);
    offdiag[n - 1] = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();

    for (std::size_t l = 0; l < n; ++l) {
        int iterations = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::fabs(diag[m]) + std::fabs(diag[m + 1]);
                if (std::fabs(offdiag[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (++iterations > 60) {
                    throw Error(ErrorKind::ConvergenceFailure, "tridiagonal QL did not converge");
                }
                double g = (diag[l + 1] - diag[l]) / (2.0 * offdiag[l]);
                double r = std::hypot(g, 1.0);
                g = diag[m] - diag[l] + offdiag[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (std::size_t ii = m; ii-- > l;) {
                    const double f = s * offdiag[ii];
                    const double b = c * offdiag[ii];
                    r = std::hypot(f, g);
                    offdiag[ii + 1] = r;
                    if (r == 0.0) {
                        diag[ii + 1] -= p;
                        offdiag[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = diag[ii + 1] - p;
                    r = (diag[ii] - g) * s + 2.0 * c * b;
                    p = s * r;
                    diag[ii + 1] = g + p;
                    g = c * r - b;
                    const double z = first[ii + 1];
                    first[ii + 1] = s * first[ii] + c * z;
                    first[ii] = c * first[ii] - s * z;
                }
                if (underflow) continue;
                diag[l] -= p;
                offdiag[l] = g;
                offdiag[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace detail

/// m-point Gauss rule for the weight (1 − x)^a (1 + x)^b on [−1, 1].
inline Rule gauss_jacobi(std::size_t m, double a, double b) {
    if (m < 1) throw Error(ErrorKind::DomainInvalid, "gauss_jacobi needs at least one node");
    if (!(a > -1.0) || !(b > -1.0)) {
        throw Error(ErrorKind::DomainInvalid, "Jacobi exponents must exceed -1");
    }
    std::vector<double> diag(m), off(m > 1 ? m - 1 : 0);
    const double ab = a + b;
    diag[0] = (b - a) / (ab + 2.0);
    for (std::size_t k = 1; k < m; ++k) {
        const double kk = static_cast<double>(k);
        const double s = 2.0 * kk + ab;
        diag[k] = (b * b - a * a) / (s * (s + 2.0));
    }
    for (std::size_t k = 1; k < m; ++k) {
        const double kk = static_cast<double>(k);
        const double s = 2.0 * kk + ab;
        double beta;
        if (k == 1) {
            beta = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
        } else {
            beta = 4.0 * kk * (kk + a) * (kk + b) * (kk + ab) / (s * s * (s + 1.0) * (s - 1.0));
        }
        off[k - 1] = std::sqrt(beta);
    }
    const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                                std::lgamma(ab + 2.0));

    std::vector<double> first;
    detail::tridiagonal_ql(diag, off, first);

    std::vector<std::pair<double, double>> pairs(m);
    for (std::size_t i = 0; i < m; ++i) pairs[i] = {diag[i], mu0 * first[i] * first[i]};
    std::sort(pairs.begin(), pairs.end());
    Rule rule;
    rule.nodes.reserve(m);
    rule.weights.reserve(m);
    for (const auto& [x, w] : pairs) {
        rule.nodes.push_back(x);
        rule.weights.push_back(w);
    }
    return rule;
}

/// Gauss-Legendre rule, cached per order.
inline const Rule& gauss_legendre(std::size_t m) {
    static std::mutex mutex;
    static std::map<std::size_t, Rule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, gauss_jacobi(m, 0.0, 0.0)).first;
    return it->second;
}

/// ∫_lo^hi f(u) du by the given Legendre rule.
template <class F>
double apply(const Rule& rule, F&& f, double lo, double hi) {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

/// ∫_lo^hi (hi − u)^a f(u) du using a Gauss-Jacobi rule built for exponent a
/// (and b = 0). The rule must have been built with the same `a`.
template <class F>
double apply_right_singular(const Rule& jacobi_rule, double a, F&& f, double lo, double hi) {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double sum = 0.0;
    for (std::size_t i = 0; i < jacobi_rule.size(); ++i) {
        sum += jacobi_rule.weights[i] * f(mid + half * jacobi_rule.nodes[i]);
    }
    return std::pow(half, a + 1.0) * sum;
}

struct AdaptiveResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t intervals = 0;
};

/// Adaptive bisection with a 10-point Gauss-Legendre rule per panel. A panel
/// is accepted when |Q(panel) − Q(left) − Q(right)| falls under its share of
/// `abs_tol` (proportional to its length). Accepted panels are summed in
/// left-to-right order, so the result is bitwise deterministic.
template <class F>
AdaptiveResult integrate_adaptive(F&& f, double lo, double hi, double abs_tol, std::size_t max_intervals = 200000) {
    if (!(abs_tol > 0.0)) throw Error(ErrorKind::DomainInvalid, "quadrature tolerance must be positive");
    AdaptiveResult result;
    if (hi == lo) return result;
    const Rule& rule = gauss_legendre(10);
    const double total = hi - lo;

    struct Panel {
        double lo, hi, whole;
    };
    std::vector<Panel> stack;
    stack.push_back({lo, hi, apply(rule, f, lo, hi)});
    std::size_t processed = 0;
    while (!stack.empty()) {
        Panel panel = stack.back();
        stack.pop_back();
        if (++processed > max_intervals) {
            throw Error(ErrorKind::QuadratureFailure,
                        "adaptive quadrature exceeded " + std::to_string(max_intervals) + " panels");
        }
        const double mid = 0.5 * (panel.lo + panel.hi);
        const double left = apply(rule, f, panel.lo, mid);
        const double right = apply(rule, f, mid, panel.hi);
        const double err = std::fabs(panel.whole - (left + right));
        const double share = abs_tol * (panel.hi - panel.lo) / total;
        const bool tiny = (panel.hi - panel.lo) <= 64.0 * std::numeric_limits<double>::epsilon() * std::fabs(mid);
        if (err <= share || tiny) {
            if (tiny && err > share) {
                throw Error(ErrorKind::QuadratureFailure, "panel collapsed before tolerance was met");
            }
            result.value += left + right;
            result.error_estimate += err;
            ++result.intervals;
            continue;
        }
        // Right half first so the left half is processed next.
        stack.push_back({mid, panel.hi, right});
        stack.push_back({panel.lo, mid, left});
    }
    return result;
}

}  // namespace hlyap::quad
