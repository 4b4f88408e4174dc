#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "hlyap/params.hpp"

using hlyap::Error;
using hlyap::ErrorKind;
using hlyap::validate;

namespace {

constexpr double kE = 2.718281828459045;

ErrorKind kind_of(double s, double k, double a, double b) {
    try {
        validate(s, k, a, b);
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected an error";
    return ErrorKind::DomainInvalid;
}

}  // namespace

TEST(Params, AcceptsExampleAndExposesDerivedQuantities) {
    const auto p = validate(1.75, 0.5, 1.0, kE);
    EXPECT_EQ(p.sigma(), 1.75);
    EXPECT_EQ(p.kappa(), 0.5);
    EXPECT_EQ(p.t1(), 1.0);
    EXPECT_EQ(p.t2(), kE);
    EXPECT_NEAR(p.log_length(), 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(p.kernel_exponent(), 0.25);
}

TEST(Params, SigmaTwoIsAllowed) { EXPECT_NO_THROW(validate(2.0, 0.5, 1.0, 3.0)); }

TEST(Params, OrderErrors) {
    EXPECT_EQ(kind_of(1.0, 0.5, 1, 2), ErrorKind::OrderOutOfRange);
    EXPECT_EQ(kind_of(2.5, 0.5, 1, 2), ErrorKind::OrderOutOfRange);
    EXPECT_EQ(kind_of(1.5, 0.0, 1, 2), ErrorKind::OrderOutOfRange);
    EXPECT_EQ(kind_of(1.5, -0.1, 1, 2), ErrorKind::OrderOutOfRange);
    EXPECT_EQ(kind_of(1.5, 0.6, 1, 2), ErrorKind::OrderOutOfRange);
}

TEST(Params, KappaAtBoundaryIsItsOwnError) {
    EXPECT_EQ(kind_of(1.5, 0.5, 1, 2), ErrorKind::BoundaryOrderUnsupported);
    EXPECT_EQ(kind_of(1.75, 0.75, 1, 2), ErrorKind::BoundaryOrderUnsupported);
}

TEST(Params, DomainErrors) {
    EXPECT_EQ(kind_of(1.5, 0.25, 0.0, 2), ErrorKind::DomainInvalid);
    EXPECT_EQ(kind_of(1.5, 0.25, -1.0, 2), ErrorKind::DomainInvalid);
    EXPECT_EQ(kind_of(1.5, 0.25, 2.0, 2.0), ErrorKind::DomainInvalid);
    EXPECT_EQ(kind_of(1.5, 0.25, 3.0, 2.0), ErrorKind::DomainInvalid);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double inf = std::numeric_limits<double>::infinity();
    EXPECT_EQ(kind_of(nan, 0.25, 1, 2), ErrorKind::DomainInvalid);
    EXPECT_EQ(kind_of(1.5, 0.25, 1, inf), ErrorKind::DomainInvalid);
}

TEST(Params, OrderCheckedBeforeInterval) {
    // Both the order and the interval are wrong; the order is reported.
    EXPECT_EQ(kind_of(3.0, 0.25, 2.0, 1.0), ErrorKind::OrderOutOfRange);
}

TEST(Params, MessageNamesConstraint) {
    try {
        validate(1.5, 0.25, 2.0, 1.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("t2"), std::string::npos) << e.what();
    }
}

TEST(Verdict, StrictComparison) {
    using hlyap::Verdict;
    using hlyap::VerdictKind;
    EXPECT_EQ(Verdict::from(1.0, 2.0).kind, VerdictKind::NoNontrivialSolution);
    EXPECT_EQ(Verdict::from(2.0, 2.0).kind, VerdictKind::Inconclusive);
    EXPECT_EQ(Verdict::from(3.0, 2.0).kind, VerdictKind::Inconclusive);
    EXPECT_STREQ(hlyap::to_string(VerdictKind::Inconclusive), "Inconclusive");
}
