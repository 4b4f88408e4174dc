#include <gtest/gtest.h>

#include <cmath>

#include "hlyap/errors.hpp"
#include "hlyap/special_functions.hpp"

using hlyap::reciprocal_gamma;

// Reference values from mpmath at 30 digits.
TEST(Gamma, MatchesHighPrecisionReferences) {
    struct Case {
        double x, value;
    };
    const Case cases[] = {
        {0.1, 9.51350769866873183629},      {0.3, 2.99156898768759062831},
        {0.5, 1.77245385090551602730},      {1.25, 0.906402477055477077983},
        {1.5, 0.886226925452758013649},     {2.75, 1.60835942198554565923},
        {3.7, 4.17065178379660316540},      {7.3, 1271.42363366390927306},
        {29.5, 1.63481251982742664444e30},  {30.0, 8.841761993739701954543616e30},
    };
    for (const auto& c : cases) {
        EXPECT_NEAR(hlyap::gamma(c.x) / c.value, 1.0, 1e-12) << "x = " << c.x;
    }
}

TEST(Gamma, IntegersAreFactorials) {
    double fact = 1.0;
    for (int n = 1; n <= 20; ++n) {
        EXPECT_EQ(hlyap::gamma(n), fact) << n;
        fact *= n;
    }
}

TEST(Gamma, RejectsNonPositiveAndNonFinite) {
    for (double x : {0.0, -0.5, -2.0, std::nan(""), double(INFINITY)}) {
        try {
            hlyap::gamma(x);
            FAIL() << x;
        } catch (const hlyap::Error& e) {
            EXPECT_EQ(e.kind(), hlyap::ErrorKind::DomainInvalid);
        }
    }
}

TEST(ReciprocalGamma, ZeroAtPoles) {
    for (double x : {0.0, -1.0, -2.0, -7.0}) EXPECT_EQ(reciprocal_gamma(x), 0.0) << x;
}

TEST(ReciprocalGamma, MatchesReferenceOffPoles) {
    EXPECT_NEAR(reciprocal_gamma(-0.5), 1.0 / -3.54490770181103205460, 1e-14);
    EXPECT_NEAR(reciprocal_gamma(-1.5), 1.0 / 2.36327180120735470306, 1e-14);
    EXPECT_NEAR(reciprocal_gamma(1.25) * 0.906402477055477077983, 1.0, 1e-14);
}
