#include <gtest/gtest.h>

#include <cmath>

#include "hlyap/acceptance.hpp"
#include "hlyap/lyapunov_bounds.hpp"

using namespace hlyap;

namespace {

constexpr double kE = 2.718281828459045;

}  // namespace

TEST(Bound, Example1) {
    const auto p = validate(1.75, 0.5, 1.0, kE);
    EXPECT_NEAR(lyapunov_bound(p), 2.35490271354955476703, 1e-13);
    EXPECT_NEAR(eigenvalue_bound(p), 4.04638654048109620406, 1e-12);
    EXPECT_NEAR(constant_coefficient_bound(p), 2.35490271354955476703 / (kE - 1.0), 1e-13);
    const auto r = lyapunov_report(p);
    EXPECT_EQ(r.bound, lyapunov_bound(p));
    EXPECT_EQ(r.eigen_bound, eigenvalue_bound(p));
    EXPECT_FALSE(r.q_integral.has_value());
}

TEST(Bound, OtherReferenceCases) {
    EXPECT_NEAR(lyapunov_bound(validate(1.5, 0.25, 1.0, kE)), 2.42086575435276190920, 1e-13);
    EXPECT_NEAR(lyapunov_bound(validate(1.4, 0.1, 2.0, 7.0)), 4.354382734377408854515, 1e-12);
}

TEST(Bound, EqualsGammaOverMaxOfG) {
    for (const auto& p : acceptance::random_params(11, 25)) {
        EXPECT_NEAR(lyapunov_bound(p) * green_max(p).max_abs_g, 1.0, 1e-14);
    }
}

TEST(Nonexistence, Example1Verdict) {
    const auto p = validate(1.75, 0.5, 1.0, kE);
    const Verdict v = nonexistence_check(p, Coefficient::expression("ln(t)"), 1e-11);
    EXPECT_NEAR(v.q_integral, 1.0, 1e-10);
    EXPECT_EQ(v.kind, VerdictKind::NoNontrivialSolution);
    EXPECT_EQ(v.bound, lyapunov_bound(p));
}

TEST(Nonexistence, ConstantCoefficients) {
    const auto p = validate(1.75, 0.5, 1.0, kE);
    EXPECT_EQ(nonexistence_check(p, Coefficient::constant(0.0)).kind, VerdictKind::NoNontrivialSolution);
    const Verdict ten = nonexistence_check(p, Coefficient::constant(10.0));
    EXPECT_EQ(ten.kind, VerdictKind::Inconclusive);
    EXPECT_NEAR(ten.q_integral, 10.0 * (kE - 1.0), 1e-9);
}

TEST(Nonexistence, TableMustSpanInterval) {
    const auto p = validate(1.75, 0.5, 1.0, kE);
    const Coefficient ok = Coefficient::table({1.0, kE}, {0.0, 1.0});
    EXPECT_NEAR(nonexistence_check(p, ok, 1e-12).q_integral, 1.0, 1e-10);  // linear in ln t == ln t
    const Coefficient short_table = Coefficient::table({1.0, 2.0}, {0.0, 1.0});
    try {
        nonexistence_check(p, short_table);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::OutOfTableRange);
    }
}

TEST(AbsIntegral, SignChangesInside) {
    // Reference values from mpmath.
    EXPECT_NEAR(integrate_abs_q([](double t) { return std::log(t) - 0.5; }, 1.0, kE, 1e-12),
                0.438301627170733676017, 1e-11);
    EXPECT_NEAR(integrate_abs_q([](double t) { return std::sin(3 * std::log(t)); }, 1.0, kE * kE, 1e-12),
                4.34467965782183215198, 1e-10);
}

TEST(AbsIntegral, ExactZeroOnScanPoint) {
    // q vanishes exactly at the scan midpoint t = 2.
    EXPECT_NEAR(integrate_abs_q([](double t) { return t - 2.0; }, 1.0, 3.0, 1e-12), 1.0, 1e-11);
}

TEST(AbsIntegral, EvalErrorsPropagate) {
    const auto q = Coefficient::expression("1/(t-2)");
    try {
        integrate_abs_q(q, 1.0, 3.0, 1e-9);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::EvalError);
    }
}

TEST(LambdaCheck, Example2) {
    const auto p = validate(1.75, 0.5, 1.0, kE);
    EXPECT_EQ(lambda_nonexistence_check(p, 4.0).kind, VerdictKind::NoNontrivialSolution);
    EXPECT_EQ(lambda_nonexistence_check(p, -4.0).kind, VerdictKind::NoNontrivialSolution);
    EXPECT_EQ(lambda_nonexistence_check(p, 4.1).kind, VerdictKind::Inconclusive);
    try {
        lambda_nonexistence_check(p, 0.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ZeroLambda);
    }
}

TEST(KappaLimit, ApproachesSingleOrderBound) {
    for (double sigma : {1.3, 1.6, 1.9}) {
        const auto p = validate(sigma, 1e-7, 1.0, kE);
        const double ours = hlyap::gamma(sigma - 1e-7) / omega(p);
        EXPECT_NEAR(ours / reference_bound_kappa0(sigma, 1.0, kE), 1.0, 1e-5) << sigma;
    }
}

TEST(KappaLimit, ReferencePointIsDiagonalCriticalPoint) {
    // At κ → 0 the diagonal critical point tends to ϱ.
    const auto p = validate(1.6, 1e-9, 1.0, kE);
    EXPECT_NEAR(t_star(p), reference_bound_kappa0_point(1.6, 1.0, kE), 1e-7);
}
