#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include "hlyap/errors.hpp"

namespace hlyap {

/// Problem data (σ, κ, t1, t2) for
///   D^σ x + D^κ (q x) = 0 on (t1, t2),  x(t1) = x(t2) = 0,
/// with Hadamard derivatives based at t1. Only constructible through
/// validate(), so every instance satisfies
///   1 < σ ≤ 2,  0 < κ < σ − 1,  0 < t1 < t2 < ∞.
class FracParams {
public:
    double sigma() const noexcept { return sigma_; }
    double kappa() const noexcept { return kappa_; }
    double t1() const noexcept { return t1_; }
    double t2() const noexcept { return t2_; }

    /// L = ln(t2/t1), the interval length in the logarithmic variable.
    double log_length() const noexcept { return log_length_; }

    /// σ − κ − 1, the exponent of the logarithmic kernel; lies in (0, 1).
    double kernel_exponent() const noexcept { return sigma_ - kappa_ - 1.0; }

    friend FracParams validate(double sigma, double kappa, double t1, double t2);

private:
    FracParams(double sigma, double kappa, double t1, double t2)
        : sigma_(sigma), kappa_(kappa), t1_(t1), t2_(t2), log_length_(std::log(t2 / t1)) {}

    double sigma_;
    double kappa_;
    double t1_;
    double t2_;
    double log_length_;
};

/// Checks the parameter quadruple and returns it as a FracParams.
///
/// Comparisons are exact, with no epsilon slack. κ = σ − 1 is reported as
/// BoundaryOrderUnsupported rather than OrderOutOfRange: the kernel exponent
/// σ − κ − 1 vanishes there and the closed-form maximum degenerates.
inline FracParams validate(double sigma, double kappa, double t1, double t2) {
    auto describe = [&] {
        std::ostringstream os;
        os.precision(17);
        os << "(sigma=" << sigma << ", kappa=" << kappa << ", t1=" << t1 << ", t2=" << t2 << ")";
        return os.str();
    };
    if (!std::isfinite(sigma) || !std::isfinite(kappa) || !std::isfinite(t1) || !std::isfinite(t2)) {
        throw Error(ErrorKind::DomainInvalid, "non-finite input " + describe());
    }
    if (!(sigma > 1.0 && sigma <= 2.0)) {
        throw Error(ErrorKind::OrderOutOfRange, "sigma must satisfy 1 < sigma <= 2 " + describe());
    }
    if (!(kappa > 0.0)) {
        throw Error(ErrorKind::OrderOutOfRange, "kappa must satisfy 0 < kappa " + describe());
    }
    if (kappa == sigma - 1.0) {
        throw Error(ErrorKind::BoundaryOrderUnsupported, "kappa = sigma - 1 is not supported " + describe());
    }
    if (!(kappa < sigma - 1.0)) {
        throw Error(ErrorKind::OrderOutOfRange, "kappa must satisfy kappa < sigma - 1 " + describe());
    }
    if (!(t1 > 0.0)) {
        throw Error(ErrorKind::DomainInvalid, "t1 must be positive " + describe());
    }
    if (!(t2 > t1)) {
        throw Error(ErrorKind::DomainInvalid, "t2 must exceed t1 " + describe());
    }
    FracParams p(sigma, kappa, t1, t2);
    if (!(p.log_length() > 0.0)) {
        // t2 / t1 rounds to 1 for adjacent doubles.
        throw Error(ErrorKind::DomainInvalid, "ln(t2/t1) underflows to zero " + describe());
    }
    return p;
}

enum class VerdictKind { NoNontrivialSolution, Inconclusive };

constexpr const char* to_string(VerdictKind kind) noexcept {
    return kind == VerdictKind::NoNontrivialSolution ? "NoNontrivialSolution" : "Inconclusive";
}

/// Outcome of a nonexistence test: the left side (q_integral) is compared
/// strictly against the bound; equality is Inconclusive.
struct Verdict {
    VerdictKind kind;
    double bound;
    double q_integral;

    static Verdict from(double q_integral, double bound) noexcept {
        return Verdict{q_integral < bound ? VerdictKind::NoNontrivialSolution : VerdictKind::Inconclusive,
                       bound, q_integral};
    }
};

}  // namespace hlyap
