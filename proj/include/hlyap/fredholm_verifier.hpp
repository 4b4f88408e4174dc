#pragma once

// Discretization of x(t) = ∫ G(t,s) q(s) x(s) ds and its dominant eigenvalue.
//
// In the log variable u = ln(s/t1) the operator reads
//   (Kx)(x) = (1/Γ(σ−κ)) ∫_0^L k(x,u) q(u) x(u) du,
//   k(x,u) = (x/L)^(σ−1) (L−u)^a − [u < x] (x−u)^a,   a = σ−κ−1,
// because the 1/s in the kernel cancels ds = s du. The unknown is taken
// piecewise linear on n uniform log-nodes and every kernel-times-hat integral
// is computed by product quadrature: Gauss-Jacobi on the cell ending at the
// kernel's kink, Gauss-Legendre elsewhere.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <exception>
#include <limits>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "hlyap/coefficient.hpp"
#include "hlyap/errors.hpp"
#include "hlyap/lyapunov_bounds.hpp"
#include "hlyap/params.hpp"
#include "hlyap/quadrature.hpp"
#include "hlyap/special_functions.hpp"

namespace hlyap {

inline constexpr std::size_t kNystromMaxNodes = 4000;

/// Square row-major matrix.
class DenseMatrix {
public:
    DenseMatrix() = default;
    explicit DenseMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

    std::size_t size() const noexcept { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    const double* row(std::size_t i) const { return data_.data() + i * n_; }

    std::vector<double> apply(const std::vector<double>& x) const {
        std::vector<double> y(n_, 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            const double* r = row(i);
            double s = 0.0;
            for (std::size_t j = 0; j < n_; ++j) s += r[j] * x[j];
            y[i] = s;
        }
        return y;
    }

    DenseMatrix transposed() const {
        DenseMatrix t(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// Node positions t_i = t1·exp(L·i/(n−1)), i = 0..n−1.
inline std::vector<double> nystrom_nodes(const FracParams& p, std::size_t n) {
    std::vector<double> t(n);
    const double L = p.log_length();
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = i + 1 == n ? p.t2() : p.t1() * std::exp(L * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    return t;
}

namespace detail {

inline constexpr std::size_t kCellPoints = 8;

// q sampled at the Legendre and Jacobi points of every cell.
struct CellSamples {
    std::vector<double> legendre;  // cell-major, kCellPoints per cell
    std::vector<double> jacobi;
};

// Integrals ∫_0^{u_i} (u_i − u)^a q(u) φ_j(u) du for all j.
inline void singular_row(std::size_t i, std::size_t n, double h, double a, const quad::Rule& gl, const quad::Rule& gj,
                         const CellSamples& qs, double* out) {
    const std::size_t m = kCellPoints;
    const double half = 0.5 * h;
    for (std::size_t k = 0; k + 1 < i; ++k) {
        double left = 0.0, right = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
            const double frac = 0.5 * (1.0 + gl.nodes[r]);  // position inside the cell
            const double dist = (static_cast<double>(i - k) - frac) * h;
            const double w = gl.weights[r] * std::pow(dist, a) * qs.legendre[k * m + r];
            left += w * (1.0 - frac);
            right += w * frac;
        }
        out[k] += half * left;
        out[k + 1] += half * right;
    }
    if (i == 0) return;
    const std::size_t k = i - 1;
    double left = 0.0, right = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        const double frac = 0.5 * (1.0 + gj.nodes[r]);
        const double w = gj.weights[r] * qs.jacobi[k * m + r];
        left += w * (1.0 - frac);
        right += w * frac;
    }
    const double scale = std::pow(half, a + 1.0);
    out[k] += scale * left;
    out[k + 1] += scale * right;
    (void)n;
}

}  // namespace detail

/// n×n product-integration matrix of the operator x ↦ ∫ G(·,s) q(s) x(s) ds on
/// the nodes of nystrom_nodes(p, n). Rows at t1 and t2 are exactly zero.
inline DenseMatrix nystrom_matrix(const FracParams& p, const Coefficient& q, std::size_t n) {
    if (n < 8) throw Error(ErrorKind::DomainInvalid, "nystrom_matrix needs n >= 8");
    if (n > kNystromMaxNodes) {
        throw Error(ErrorKind::ResourceLimit, "nystrom_matrix n exceeds " + std::to_string(kNystromMaxNodes));
    }
    const double L = p.log_length();
    const double a = p.kernel_exponent();
    const double s1 = p.sigma() - 1.0;
    const double h = L / static_cast<double>(n - 1);
    const std::size_t m = detail::kCellPoints;
    const quad::Rule& gl = quad::gauss_legendre(m);
    const quad::Rule gj = quad::gauss_jacobi(m, a, 0.0);

    detail::CellSamples qs;
    qs.legendre.resize((n - 1) * m);
    qs.jacobi.resize((n - 1) * m);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double u0 = L * static_cast<double>(k) / static_cast<double>(n - 1);
        for (std::size_t r = 0; r < m; ++r) {
            qs.legendre[k * m + r] = q(p.t1() * std::exp(u0 + 0.5 * h * (1.0 + gl.nodes[r])));
            qs.jacobi[k * m + r] = q(p.t1() * std::exp(u0 + 0.5 * h * (1.0 + gj.nodes[r])));
        }
    }

    // The far-end integrals ∫_0^L (L − u)^a q φ_j are the last singular row, so
    // row n−1 cancels exactly.
    std::vector<double> far(n, 0.0);
    detail::singular_row(n - 1, n, h, a, gl, gj, qs, far.data());

    DenseMatrix K(n);
    const double inv_gamma = 1.0 / gamma(p.sigma() - p.kappa());
    auto fill_rows = [&](std::size_t lo, std::size_t hi) {
        std::vector<double> near(n);
        for (std::size_t i = lo; i < hi; ++i) {
            std::fill(near.begin(), near.end(), 0.0);
            detail::singular_row(i, n, h, a, gl, gj, qs, near.data());
            const double A = i + 1 == n ? 1.0 : std::pow(static_cast<double>(i) / static_cast<double>(n - 1), s1);
            for (std::size_t j = 0; j < n; ++j) K(i, j) = (A * far[j] - near[j]) * inv_gamma;
        }
    };

    const unsigned workers = std::max(1u, std::min(std::thread::hardware_concurrency(), 16u));
    if (workers == 1 || n < 128) {
        fill_rows(0, n);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
            if (lo < hi) pool.emplace_back(fill_rows, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return K;
}

struct DominantEigen {
    std::complex<double> mu;            // imaginary part ≥ 0 for a complex pair
    std::vector<std::complex<double>> vector;  // normalized to max modulus 1
    bool is_real = true;
    std::size_t iterations = 0;
};

namespace detail {

inline double dot(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline double normalize(std::vector<double>& x) {
    const double nrm = std::sqrt(dot(x, x));
    if (nrm > 0.0)
        for (double& v : x) v /= nrm;
    return nrm;
}

// y -= (x·y) x, applied twice for stability.
inline void orthogonalize(const std::vector<double>& x, std::vector<double>& y) {
    for (int pass = 0; pass < 2; ++pass) {
        const double c = dot(x, y);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] -= c * x[i];
    }
}

struct Ritz2 {
    std::complex<double> dominant;
    bool real;
};

inline Ritz2 ritz_dominant(double h00, double h01, double h10, double h11) {
    const double tr = h00 + h11, det = h00 * h11 - h01 * h10;
    const double disc = 0.25 * tr * tr - det;
    if (disc >= 0.0) {
        const double r = std::sqrt(disc);
        const double l1 = 0.5 * tr + r, l2 = 0.5 * tr - r;
        return {std::fabs(l1) >= std::fabs(l2) ? l1 : l2, true};
    }
    return {{0.5 * tr, std::sqrt(-disc)}, false};
}

}  // namespace detail

/// Dominant eigenvalue of K by two-vector subspace iteration with 2×2 Ritz
/// extraction, so a dominant complex-conjugate pair is captured as well as a
/// real eigenvalue. Converged when the dominant modulus changes by at most
/// 1e-12 relative on three consecutive sweeps; ConvergenceFailure if the last
/// change after `max_iterations` still exceeds 1e-10.
inline DominantEigen dominant_eigen(const DenseMatrix& K, std::size_t max_iterations = 20000) {
    const std::size_t n = K.size();
    if (n < 2) throw Error(ErrorKind::DomainInvalid, "dominant_eigen needs n >= 2");
    constexpr double pi = 3.14159265358979323846;
    std::vector<double> v1(n), v2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(n - 1);
        v1[i] = std::sin(pi * x) + 0.25;
        v2[i] = std::cos(pi * x) + 0.5 * std::sin(3.0 * pi * x);
    }
    detail::normalize(v1);
    detail::orthogonalize(v1, v2);
    detail::normalize(v2);

    double previous = std::numeric_limits<double>::quiet_NaN();
    double last_change = std::numeric_limits<double>::infinity();
    int stable = 0;
    detail::Ritz2 ritz{};
    double h[4] = {};
    std::size_t it = 0;
    for (; it < max_iterations; ++it) {
        std::vector<double> w1 = K.apply(v1), w2 = K.apply(v2);
        h[0] = detail::dot(v1, w1);
        h[1] = detail::dot(v1, w2);
        h[2] = detail::dot(v2, w1);
        h[3] = detail::dot(v2, w2);
        ritz = detail::ritz_dominant(h[0], h[1], h[2], h[3]);
        const double modulus = std::abs(ritz.dominant);

        const double n1 = detail::normalize(w1);
        if (!(n1 > 0.0)) throw Error(ErrorKind::ConvergenceFailure, "operator annihilates the iteration subspace");
        detail::orthogonalize(w1, w2);
        const double n2 = detail::normalize(w2);
        if (!(n2 > 1e-14 * n1)) throw Error(ErrorKind::ConvergenceFailure, "iteration subspace collapsed to rank one");

        if (std::isfinite(previous)) {
            last_change = std::fabs(modulus - previous) / std::max(modulus, std::numeric_limits<double>::min());
            stable = last_change <= 1e-12 ? stable + 1 : 0;
        }
        previous = modulus;
        if (stable >= 3) {
            // Keep the basis the Ritz matrix was computed on.
            ++it;
            break;
        }
        v1 = std::move(w1);
        v2 = std::move(w2);
    }
    if (stable < 3 && !(last_change <= 1e-10)) {
        throw Error(ErrorKind::ConvergenceFailure,
                    "subspace iteration stagnated (relative change " + std::to_string(last_change) + ")");
    }

    // Eigenvector of the Ritz matrix lifted back through the basis.
    const std::complex<double> mu = ritz.dominant;
    std::complex<double> y0, y1;
    const std::complex<double> a0(h[1]), a1 = mu - h[0];
    const std::complex<double> b0 = mu - h[3], b1(h[2]);
    if (std::abs(a0) + std::abs(a1) >= std::abs(b0) + std::abs(b1)) {
        y0 = a0;
        y1 = a1;
    } else {
        y0 = b0;
        y1 = b1;
    }
    DominantEigen out;
    out.mu = mu;
    out.is_real = ritz.real;
    out.iterations = it;
    out.vector.resize(n);
    double peak = 0.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < n; ++i) {
        out.vector[i] = y0 * v1[i] + y1 * v2[i];
        if (std::abs(out.vector[i]) > peak) {
            peak = std::abs(out.vector[i]);
            arg = i;
        }
    }
    if (peak > 0.0) {
        const std::complex<double> scale = out.vector[arg];
        for (auto& z : out.vector) z /= scale;
    }
    return out;
}

struct NystromResult {
    std::size_t n = 0;
    double dominant_mu = 0.0;  // modulus of the dominant eigenvalue
    double mu_real = 0.0;
    double mu_imag = 0.0;
    bool dominant_is_real = true;
    double lambda_min = 0.0;      // 1/dominant_mu
    double analytic_bound = 0.0;  // eigenvalue_bound(p)
    double constant_q_bound = 0.0;  // constant_coefficient_bound(p)
    bool satisfied = false;       // lambda_min ≥ analytic_bound
    double eigenvector_boundary_residual = 0.0;
    std::size_t iterations = 0;
    double transpose_mu = 0.0;  // dominant modulus of Kᵀ
};

/// Smallest |λ| for which D^σ x + λ D^κ x = 0 with the two boundary
/// conditions has a nontrivial solution, estimated as 1/|μ| for the dominant
/// eigenvalue μ of the q ≡ 1 operator.
inline NystromResult min_eigenvalue_modulus(const FracParams& p, std::size_t n) {
    if (n < 32) throw Error(ErrorKind::DomainInvalid, "eigen mesh size must satisfy n >= 32");
    if (n > kNystromMaxNodes) {
        throw Error(ErrorKind::ResourceLimit, "eigen mesh size exceeds " + std::to_string(kNystromMaxNodes));
    }
    const DenseMatrix K = nystrom_matrix(p, Coefficient::constant(1.0), n);
    const DominantEigen d = dominant_eigen(K);
    const DominantEigen dt = dominant_eigen(K.transposed());

    NystromResult r;
    r.n = n;
    r.dominant_mu = std::abs(d.mu);
    r.mu_real = d.mu.real();
    r.mu_imag = d.mu.imag();
    r.dominant_is_real = d.is_real;
    r.transpose_mu = std::abs(dt.mu);
    r.iterations = d.iterations;
    if (!(r.dominant_mu > 0.0)) throw Error(ErrorKind::ConvergenceFailure, "dominant eigenvalue is zero");
    if (std::fabs(r.transpose_mu - r.dominant_mu) > 1e-6 * r.dominant_mu) {
        throw Error(ErrorKind::ConvergenceFailure, "K and its transpose disagree on the dominant eigenvalue");
    }
    r.lambda_min = 1.0 / r.dominant_mu;
    r.analytic_bound = eigenvalue_bound(p);
    r.constant_q_bound = constant_coefficient_bound(p);
    r.satisfied = r.lambda_min >= r.analytic_bound;
    double peak = 0.0;
    for (const auto& z : d.vector) peak = std::max(peak, std::abs(z));
    r.eigenvector_boundary_residual =
        peak > 0.0 ? std::max(std::abs(d.vector.front()), std::abs(d.vector.back())) / peak : 0.0;
    return r;
}

/// sup_i |x_i − (K x)_i| where x is the sample set interpolated linearly in
/// ln t onto the n nodes. Samples must be sorted by t and cover [t1, t2].
inline double residual_check(const FracParams& p, const Coefficient& q,
                             const std::vector<std::pair<double, double>>& samples, std::size_t n) {
    if (samples.size() < 2) throw Error(ErrorKind::DomainInvalid, "residual_check needs at least two samples");
    for (std::size_t k = 0; k < samples.size(); ++k) {
        if (!(samples[k].first > 0.0) || !std::isfinite(samples[k].first) || !std::isfinite(samples[k].second)) {
            throw Error(ErrorKind::DomainInvalid, "samples must have finite values at positive t");
        }
        if (k > 0 && !(samples[k].first > samples[k - 1].first)) {
            throw Error(ErrorKind::DomainInvalid, "sample abscissae must be strictly increasing");
        }
    }
    const double slack = 1e-12 * p.t2();
    if (samples.front().first > p.t1() + slack || samples.back().first < p.t2() - slack) {
        throw Error(ErrorKind::DomainInvalid, "samples must cover [t1, t2]");
    }
    const DenseMatrix K = nystrom_matrix(p, q, n);
    const std::vector<double> t = nystrom_nodes(p, n);
    std::vector<double> x(n);
    std::size_t seg = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ti = std::clamp(t[i], samples.front().first, samples.back().first);
        while (seg + 2 < samples.size() && samples[seg + 1].first < ti) ++seg;
        const auto& [ta, xa] = samples[seg];
        const auto& [tb, xb] = samples[seg + 1];
        const double w = (std::log(ti) - std::log(ta)) / (std::log(tb) - std::log(ta));
        x[i] = ti == tb ? xb : xa + w * (xb - xa);
    }
    const std::vector<double> kx = K.apply(x);
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) res = std::max(res, std::fabs(x[i] - kx[i]));
    return res;
}

}  // namespace hlyap
