#pragma once

// Green's function of  D^σ x + D^κ(q x) = 0,  x(t1) = x(t2) = 0  (Hadamard
// derivatives based at t1) and its exact maximum modulus.
//
// With x = ln(t/t1), u = ln(s/t1), L = ln(t2/t1) and a = σ − κ − 1:
//
//   Ξ1(t,s) = (1/s) (x/L)^(σ−1) (L − u)^a                    t ≤ s
//   Ξ2(t,s) = Ξ1-form − (1/s) (x − u)^a                       s ≤ t
//   G(t,s)  = Ξ(t,s) / Γ(σ − κ)
//
// The maximum of |G| is attained either on the diagonal (value Ω, at
// t* = t1·e^{x2}) or on the edge s = t1 (value ℧, at t̂).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "hlyap/errors.hpp"
#include "hlyap/params.hpp"
#include "hlyap/special_functions.hpp"

namespace hlyap {

namespace detail {

// base^e for base ≥ 0 and e > 0, with 0^e = 0.
inline double nonneg_pow(double base, double e) { return base <= 0.0 ? 0.0 : std::pow(base, e); }

inline void require_in_interval(const FracParams& p, double t, const char* name) {
    if (!(t >= p.t1() && t <= p.t2())) {
        throw Error(ErrorKind::DomainInvalid, std::string(name) + " = " + std::to_string(t) + " outside [t1, t2]");
    }
}

}  // namespace detail

/// Ξ1(t, s) for t1 ≤ t ≤ s ≤ t2.
inline double xi1(const FracParams& p, double t, double s) {
    if (!(p.t1() <= t && t <= s && s <= p.t2())) {
        throw Error(ErrorKind::DomainInvalid, "xi1 requires t1 <= t <= s <= t2");
    }
    const double x = std::log(t / p.t1());
    const double v = std::log(p.t2() / s);
    return detail::nonneg_pow(x / p.log_length(), p.sigma() - 1.0) * detail::nonneg_pow(v, p.kernel_exponent()) / s;
}

/// Ξ2(t, s) for t1 ≤ s ≤ t ≤ t2. Equal to xi1(p, t, t) at s = t.
inline double xi2(const FracParams& p, double t, double s) {
    if (!(p.t1() <= s && s <= t && t <= p.t2())) {
        throw Error(ErrorKind::DomainInvalid, "xi2 requires t1 <= s <= t <= t2");
    }
    const double x = std::log(t / p.t1());
    const double v = std::log(p.t2() / s);
    const double a = p.kernel_exponent();
    const double first = detail::nonneg_pow(x / p.log_length(), p.sigma() - 1.0) * detail::nonneg_pow(v, a);
    return (first - detail::nonneg_pow(std::log(t / s), a)) / s;
}

/// G(t, s) on [t1, t2]².
inline double green_eval(const FracParams& p, double t, double s) {
    detail::require_in_interval(p, t, "t");
    detail::require_in_interval(p, s, "s");
    const double xi = t <= s ? xi1(p, t, s) : xi2(p, t, s);
    return xi / gamma(p.sigma() - p.kappa());
}

/// s·Ξ(t, s) expressed in the log variables x = ln(t/t1), u = ln(s/t1).
/// Independent of t1; G(t,s) ds = kernel_log(x,u) du / Γ(σ−κ).
inline double kernel_log(const FracParams& p, double x, double u) {
    const double L = p.log_length();
    const double a = p.kernel_exponent();
    double value = detail::nonneg_pow(x / L, p.sigma() - 1.0) * detail::nonneg_pow(L - u, a);
    if (u < x) value -= std::pow(x - u, a);
    return value;
}

/// h(t) = (ln(t/t1))^(σ−1) (ln(t2/t))^(σ−κ−1) / t, so Ξ1(t,t) = h(t)/L^(σ−1).
inline double diag_h(const FracParams& p, double t) {
    detail::require_in_interval(p, t, "t");
    const double x = std::log(t / p.t1());
    const double v = std::log(p.t2() / t);
    return detail::nonneg_pow(x, p.sigma() - 1.0) * detail::nonneg_pow(v, p.kernel_exponent()) / t;
}

/// ζ(t) = |Ξ2(t, t1)| = (ln(t/t1))^(σ−κ−1) [1 − (ln(t/t1)/L)^κ] / t1.
inline double zeta(const FracParams& p, double t) {
    detail::require_in_interval(p, t, "t");
    const double x = std::log(t / p.t1());
    const double ratio = std::min(1.0, x / p.log_length());
    return detail::nonneg_pow(x, p.kernel_exponent()) * (1.0 - std::pow(ratio, p.kappa())) / p.t1();
}

/// Δ = (L + 2(σ−1) − κ)² − 4(σ−1)L.
inline double discriminant(const FracParams& p) {
    const double L = p.log_length();
    const double b = L + 2.0 * (p.sigma() - 1.0) - p.kappa();
    return b * b - 4.0 * (p.sigma() - 1.0) * L;
}

/// Same quantity in the regrouped form (L − κ)² + 4(σ−1)² − 4(σ−1)κ, which
/// makes Δ > 0 evident since κ < σ − 1.
inline double discriminant_expanded(const FracParams& p) {
    const double L = p.log_length();
    const double s1 = p.sigma() - 1.0;
    return (L - p.kappa()) * (L - p.kappa()) + 4.0 * s1 * s1 - 4.0 * s1 * p.kappa();
}

struct CriticalRoots {
    double x1;  // discarded root, always > L
    double x2;  // admissible root in (0, L)
};

/// Roots of x² − [L + 2(σ−1) − κ] x + (σ−1)L = 0, the stationarity
/// condition of h in the log variable.
inline CriticalRoots critical_roots(const FracParams& p) {
    const double L = p.log_length();
    const double b = L + 2.0 * (p.sigma() - 1.0) - p.kappa();
    const double c = (p.sigma() - 1.0) * L;
    const double root = std::sqrt(discriminant(p));
    const double x1 = 0.5 * (b + root);
    // Product of the roots is c; avoids cancellation in b − √Δ.
    const double x2 = c / x1;
    if (!(x1 > L) || !(x2 > 0.0 && x2 < L)) {
        throw std::logic_error("critical root ordering violated: x1=" + std::to_string(x1) +
                               " x2=" + std::to_string(x2) + " L=" + std::to_string(L));
    }
    return {x1, x2};
}

inline double critical_x2(const FracParams& p) { return critical_roots(p).x2; }

/// t* = t1·e^{x2}, the maximizer of h.
inline double t_star(const FracParams& p) { return p.t1() * std::exp(critical_x2(p)); }

/// t̂ = t1·exp[((σ−κ−1)/(σ−1))^{1/κ} L], the maximizer of ζ.
inline double t_hat(const FracParams& p) {
    const double ratio = p.kernel_exponent() / (p.sigma() - 1.0);
    return p.t1() * std::exp(std::pow(ratio, 1.0 / p.kappa()) * p.log_length());
}

/// Ω = x2^(σ−1) (L − x2)^(σ−κ−1) / (L^(σ−1) t1 e^{x2}) = max_t Ξ1(t, t).
inline double omega(const FracParams& p) {
    const double L = p.log_length();
    const double x2 = critical_x2(p);
    return std::pow(x2 / L, p.sigma() - 1.0) * std::pow(L - x2, p.kernel_exponent()) / (p.t1() * std::exp(x2));
}

/// ℧ = (κ/(σ−1)) (1 − κ/(σ−1))^((σ−κ−1)/κ) L^(σ−κ−1) / t1 = max_t ζ(t).
inline double mho(const FracParams& p) {
    const double s1 = p.sigma() - 1.0;
    const double a = p.kernel_exponent();
    // 1 − κ/(σ−1) written as a/(σ−1).
    return (p.kappa() / s1) * std::pow(a / s1, a / p.kappa()) * std::pow(p.log_length(), a) / p.t1();
}

enum class MaxBranch { Diagonal, LeftEdge };

constexpr const char* to_string(MaxBranch b) noexcept { return b == MaxBranch::Diagonal ? "Diagonal" : "LeftEdge"; }

struct GreenMaxReport {
    double delta;
    double x1;
    double x2;
    double t_star;
    double t_hat;
    double omega;
    double mho;
    double gamma_sk;
    double max_abs_g;
    MaxBranch branch;
};

/// max |G| over [t1, t2]² = max{Ω, ℧} / Γ(σ−κ). Ties go to Diagonal.
inline GreenMaxReport green_max(const FracParams& p) {
    GreenMaxReport r{};
    r.delta = discriminant(p);
    const CriticalRoots roots = critical_roots(p);
    r.x1 = roots.x1;
    r.x2 = roots.x2;
    r.t_star = p.t1() * std::exp(roots.x2);
    r.t_hat = t_hat(p);
    r.omega = omega(p);
    r.mho = mho(p);
    r.gamma_sk = gamma(p.sigma() - p.kappa());
    r.branch = r.omega >= r.mho ? MaxBranch::Diagonal : MaxBranch::LeftEdge;
    r.max_abs_g = std::max(r.omega, r.mho) / r.gamma_sk;
    return r;
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

struct BruteForceMax {
    double value;         // max |G| found (grid + refinement)
    double grid_value;    // max |G| on the grid alone
    double t, s;          // location of `value`
    double x, u;          // the same location as ln(t/t1), ln(s/t1)
    std::size_t i, j;     // grid argmax (row, column)
};

inline constexpr std::size_t kBruteForceGridCap = 20000;

namespace detail {

// Golden-section maximization of f on [lo, hi]; endpoints included.
inline std::pair<double, double> golden_max(const std::function<double(double)>& f, double lo, double hi,
                                            double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double best_x = lo, best_f = f(lo);
    if (const double fh = f(hi); fh > best_f) best_x = hi, best_f = fh;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && (b - a) > tol; ++it) {
        if (fc >= fd) {
            b = d, d = c, fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c, c = d, fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        if (fc > best_f) best_x = c, best_f = fc;
        if (fd > best_f) best_x = d, best_f = fd;
    }
    return {best_x, best_f};
}

}  // namespace detail

/// Maximum of |G| by exhaustive search, evaluated in the log variables so
/// that points within machine epsilon of t1 stay distinct.
///
/// Columns are n points uniform in u = ln(s/t1). Rows are the same n points
/// in x = ln(t/t1) plus geometric rows x = h·8^(−j) (h the uniform spacing)
/// down to 1e-300, since the edge maximum can sit extremely close to t1 when
/// σ − κ − 1 is small. The grid argmax is then refined by a golden-section
/// pattern search (along x, along u and along the diagonal) inside the box
/// spanned by its grid neighbours.
inline BruteForceMax green_max_bruteforce(const FracParams& p, std::size_t n,
                                          unsigned workers = std::thread::hardware_concurrency()) {
    if (n < 16) throw Error(ErrorKind::DomainInvalid, "bruteforce grid needs n >= 16");
    if (n > kBruteForceGridCap) {
        throw Error(ErrorKind::ResourceLimit, "bruteforce grid n=" + std::to_string(n) + " exceeds cap");
    }
    const double L = p.log_length();
    const double h = L / static_cast<double>(n - 1);
    const double inv_gamma = 1.0 / gamma(p.sigma() - p.kappa());

    std::vector<double> cols(n);
    for (std::size_t k = 0; k < n; ++k) cols[k] = k + 1 == n ? L : h * static_cast<double>(k);
    std::vector<double> rows;
    for (double x = h / 8.0; x > 1e-300; x /= 8.0) rows.push_back(x);
    rows.insert(rows.end(), cols.begin(), cols.end());
    std::sort(rows.begin(), rows.end());

    auto value_at = [&](double x, double u) {
        x = std::clamp(x, 0.0, L);
        u = std::clamp(u, 0.0, L);
        return std::fabs(kernel_log(p, x, u)) * inv_gamma / (p.t1() * std::exp(u));
    };

    struct Best {
        double value = -1.0;
        std::size_t i = 0, j = 0;
    };
    auto scan_rows = [&](std::size_t row_begin, std::size_t row_end) {
        Best best;
        for (std::size_t i = row_begin; i < row_end; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const double v = value_at(rows[i], cols[j]);
                if (v > best.value) best = {v, i, j};
            }
        }
        return best;
    };

    const std::size_t m = rows.size();
    workers = std::max(1u, std::min<unsigned>(workers == 0 ? 1u : workers, 16u));
    std::vector<Best> partial(workers);
    {
        std::vector<std::thread> pool;
        const std::size_t chunk = (m + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t lo = std::min(m, w * chunk), hi = std::min(m, lo + chunk);
            pool.emplace_back([&, w, lo, hi] { partial[w] = scan_rows(lo, hi); });
        }
        for (auto& th : pool) th.join();
    }
    // Chunks are row-ordered, so a strict comparison keeps the first argmax.
    Best best;
    for (const Best& b : partial) {
        if (b.value > best.value) best = b;
    }

    double x = rows[best.i], u = cols[best.j];
    const double box_x_lo = best.i > 0 ? rows[best.i - 1] : 0.0;
    const double box_x_hi = best.i + 1 < m ? rows[best.i + 1] : L;
    const double box_u_lo = best.j > 0 ? cols[best.j - 1] : 0.0;
    const double box_u_hi = best.j + 1 < n ? cols[best.j + 1] : L;
    const double tol_x = 1e-10 * (box_x_hi - box_x_lo), tol_u = 1e-10 * (box_u_hi - box_u_lo);

    double current = best.value;
    for (int sweep = 0; sweep < 30; ++sweep) {
        const double before = current;
        {
            auto [bx, bv] = detail::golden_max([&](double xx) { return value_at(xx, u); }, box_x_lo, box_x_hi, tol_x);
            if (bv > current) x = bx, current = bv;
        }
        {
            auto [bu, bv] = detail::golden_max([&](double uu) { return value_at(x, uu); }, box_u_lo, box_u_hi, tol_u);
            if (bv > current) u = bu, current = bv;
        }
        {
            // Diagonal direction (x + τ, u + τ), restricted to the box.
            const double lo = std::max(box_x_lo - x, box_u_lo - u);
            const double hi = std::min(box_x_hi - x, box_u_hi - u);
            if (hi > lo) {
                auto [bt, bv] = detail::golden_max([&](double tau) { return value_at(x + tau, u + tau); }, lo, hi,
                                                   1e-10 * (hi - lo));
                if (bv > current) x += bt, u += bt, current = bv;
            }
        }
        if (current - before <= 1e-15 * current) break;
    }
    BruteForceMax out{};
    out.grid_value = best.value;
    out.value = current;
    out.x = x;
    out.u = u;
    out.t = std::min(p.t2(), p.t1() * std::exp(x));
    out.s = std::min(p.t2(), p.t1() * std::exp(u));
    out.i = best.i;
    out.j = best.j;
    return out;
}

/// Writes the n×n grid (uniform in ln t and ln s) as CSV `t,s,G` with
/// 17 significant digits, LF line endings.
inline void write_green_grid(std::ostream& os, const FracParams& p, std::size_t n) {
    if (n < 2) throw Error(ErrorKind::DomainInvalid, "grid needs n >= 2");
    if (n > kBruteForceGridCap) throw Error(ErrorKind::ResourceLimit, "grid size exceeds cap");
    const double h = p.log_length() / static_cast<double>(n - 1);
    std::vector<double> nodes(n);
    for (std::size_t k = 0; k < n; ++k) {
        nodes[k] = k + 1 == n ? p.t2() : p.t1() * std::exp(h * static_cast<double>(k));
    }
    os << "t,s,G\n";
    char buf[96];
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", nodes[i], nodes[j], green_eval(p, nodes[i], nodes[j]));
            os << buf;
        }
    }
}

}  // namespace hlyap
