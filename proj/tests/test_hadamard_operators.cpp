#include <gtest/gtest.h>

#include <cmath>

#include "hlyap/acceptance.hpp"
#include "hlyap/hadamard_operators.hpp"

using namespace hlyap;

namespace {

auto smooth = [](double u) { return 1.0 + u * std::exp(-u) + 0.5 * std::sin(2.0 * u); };

}  // namespace

TEST(HadamardIntegral, PowerRuleRandomPairs) {
    acceptance::Uniform draw(99);
    for (int k = 0; k < 40; ++k) {
        const double order = draw(0.05, 2.5);
        const double expo = draw(0.1, 3.0);
        const double x = draw(0.05, 3.0);
        auto g = [expo](double u) { return std::pow(u, expo - 1.0); };
        const double ref = power_rule_reference(PowerRuleOp::Integral, order, expo, 1.0, std::exp(x));
        EXPECT_NEAR(hadamard_integral_log(order, g, x), ref, 1e-7 * std::max(1.0, std::fabs(ref)))
            << "order " << order << " exponent " << expo << " x " << x;
    }
}

TEST(HadamardIntegral, TimeInterfaceForSmoothIntegrand) {
    // f(t) = ln(t/t1)^2 with t1 = 2: I^α f = Γ(3)/Γ(3+α) ln(t/t1)^(2+α).
    const double t1 = 2.0, t = 7.0;
    for (double order : {0.3, 1.0, 1.7}) {
        const double got = hadamard_integral(order, [&](double s) { return std::pow(std::log(s / t1), 2.0); }, t1, t);
        EXPECT_NEAR(got, power_rule_reference(PowerRuleOp::Integral, order, 3.0, t1, t), 1e-9);
    }
}

TEST(HadamardIntegral, OrderZeroIsIdentityAndOrderOneIsPlainIntegral) {
    EXPECT_EQ(hadamard_integral(0.0, [](double s) { return s * s; }, 1.0, 3.0), 9.0);
    // I^1 f(t) = ∫ f(s) ds/s; f = 1 gives ln(t/t1).
    EXPECT_NEAR(hadamard_integral(1.0, [](double) { return 1.0; }, 1.5, 4.0), std::log(4.0 / 1.5), 1e-14);
    EXPECT_EQ(hadamard_integral(0.7, [](double) { return 1.0; }, 2.0, 2.0), 0.0);
}

TEST(HadamardIntegral, Semigroup) {
    for (auto [a, b] : {std::pair{0.3, 0.4}, std::pair{0.8, 1.1}, std::pair{1.5, 0.25}}) {
        const auto [lhs, rhs] = composition_check_log(a, b, smooth, 1.3);
        EXPECT_NEAR(lhs, rhs, 1e-9) << a << " " << b;
    }
    const auto [l2, r2] = composition_check(0.5, 0.5, [](double s) { return std::cos(s); }, 1.0, 3.0);
    EXPECT_NEAR(l2, r2, 1e-9);
}

TEST(HadamardIntegral, PanelRefinementFollowsKernelRate) {
    // The panel next to the Gauss-Jacobi terminal panel sits at distance
    // ~h^grading from the kernel singularity, so the error scales like
    // h^(grading·α): ratio 2^(-1.2) per halving for grading 2, α = 0.6.
    auto g = [](double u) { return std::pow(u, 0.4); };
    const double ref = power_rule_reference(PowerRuleOp::Integral, 0.6, 1.4, 1.0, std::exp(1.0));
    const double expected = std::pow(2.0, -1.2);
    double prev = NAN;
    for (std::size_t panels : {8u, 16u, 32u, 64u}) {
        QuadratureConfig cfg;
        cfg.panels = panels;
        cfg.order = 2;
        cfg.grading = 2.0;
        const double err = std::fabs(hadamard_integral_log(0.6, g, 1.0, cfg) - ref);
        if (!std::isnan(prev)) { EXPECT_NEAR(err / prev, expected, 0.02) << panels; }
        prev = err;
    }
}

TEST(HadamardIntegral, Validation) {
    QuadratureConfig bad;
    bad.order = 1;
    EXPECT_THROW(hadamard_integral_log(0.5, smooth, 1.0, bad), Error);
    bad = {};
    bad.grading = 0.5;
    EXPECT_THROW(hadamard_integral_log(0.5, smooth, 1.0, bad), Error);
    bad = {};
    bad.panels = 0;
    EXPECT_THROW(hadamard_integral_log(0.5, smooth, 1.0, bad), Error);
    EXPECT_THROW(hadamard_integral(0.5, smooth, 2.0, 1.0), Error);
    EXPECT_THROW(hadamard_integral(-0.5, smooth, 1.0, 2.0), Error);
}

TEST(HadamardIntegral, NonFiniteIntegrandIsQuadratureFailure) {
    try {
        hadamard_integral_log(0.5, [](double u) { return u > 0.5 ? NAN : 1.0; }, 1.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::QuadratureFailure);
    }
}

TEST(HadamardDerivative, InvertsIntegral) {
    for (double order : {0.2, 0.5, 0.9, 1.0, 1.25, 1.6, 2.0}) {
        auto If = [&](double u) { return hadamard_integral_log(order, smooth, u); };
        for (double x : {0.3, 0.8, 1.5}) {
            EXPECT_NEAR(hadamard_derivative_log(order, If, x), smooth(x), 1e-6) << order << " " << x;
        }
    }
}

TEST(HadamardDerivative, PowerRule) {
    // D^σ (ln t)^(κ−1) = Γ(κ)/Γ(κ−σ) (ln t)^(κ−σ−1), including the zero case κ − σ = 0.
    for (auto [order, expo] : {std::pair{0.5, 2.5}, std::pair{1.5, 3.0}, std::pair{0.7, 1.7}, std::pair{1.3, 4.0}}) {
        auto g = [expo = expo](double u) { return std::pow(u, expo - 1.0); };
        const double ref = power_rule_reference(PowerRuleOp::Derivative, order, expo, 1.0, std::exp(1.2));
        EXPECT_NEAR(hadamard_derivative_log(order, g, 1.2), ref, 1e-6 * std::max(1.0, std::fabs(ref)))
            << order << " " << expo;
    }
    EXPECT_EQ(power_rule_reference(PowerRuleOp::Derivative, 1.7, 1.7, 1.0, 2.0), 0.0);
}

TEST(HadamardDerivative, IntegerOrderIsDeltaOperator) {
    // δ f = t f'(t); for f = t^2, δ f = 2 t^2 and δ² f = 4 t^2.
    auto f = [](double t) { return t * t; };
    EXPECT_NEAR(hadamard_derivative(1.0, f, 1.0, 2.0), 8.0, 1e-8);
    EXPECT_NEAR(hadamard_derivative(2.0, f, 1.0, 2.0), 16.0, 1e-6);
}

TEST(HadamardDerivative, Validation) {
    EXPECT_THROW(hadamard_derivative_log(2.5, smooth, 1.0), Error);
    EXPECT_THROW(hadamard_derivative_log(0.0, smooth, 1.0), Error);
    EXPECT_THROW(hadamard_derivative(0.5, smooth, 1.0, 1.0), Error);
}

TEST(HadamardDerivative, NoisyInputIsDifferenceInstability) {
    // A function with a jump at the evaluation point has no derivative.
    auto step = [](double u) { return u < 1.0 ? 0.0 : 1.0; };
    try {
        hadamard_derivative_log(1.0, step, 1.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DifferenceInstability);
    }
}
