#pragma once

#include <cmath>
#include <string>

#include "hlyap/errors.hpp"

namespace hlyap {

/// Euler Gamma for positive real arguments.
inline double gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw Error(ErrorKind::DomainInvalid, "gamma requires a finite positive argument, got " + std::to_string(x));
    }
    // tgamma is off by a few ulps at some integers; factorials up to 22! are exact.
    if (x <= 23.0 && x == std::floor(x)) {
        double f = 1.0;
        for (int k = 2; k < static_cast<int>(x); ++k) f *= k;
        return f;
    }
    return std::tgamma(x);
}

/// 1/Γ(x) on the whole real line, taking the value 0 at the poles
/// x = 0, −1, −2, ...
inline double reciprocal_gamma(double x) {
    if (!std::isfinite(x)) {
        throw Error(ErrorKind::DomainInvalid, "reciprocal_gamma requires a finite argument");
    }
    if (x <= 0.0 && x == std::floor(x)) return 0.0;
    return 1.0 / std::tgamma(x);
}

}  // namespace hlyap
