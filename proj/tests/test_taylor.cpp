#include "lightlike/taylor.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace lightlike;

TEST(Taylor, TermTablesCoverDegreeThree) {
    int counts[4] = {0, 0, 0, 0};
    for (int t = 0; t < Taylor::kTerms; ++t) {
        ++counts[Taylor::degree(t)];
        EXPECT_EQ(Taylor::index(Taylor::exponent(t)), t);
    }
    EXPECT_EQ(counts[0], 1);
    EXPECT_EQ(counts[1], 3);
    EXPECT_EQ(counts[2], 6);
    EXPECT_EQ(counts[3], 10);
    EXPECT_EQ(Taylor::index({4, 0, 0}), -1);
}

TEST(Taylor, ProductDerivativesMatchHandExpansion) {
    const double a = 0.7, b = -1.3;
    const Taylor x = Taylor::variable(0, a), y = Taylor::variable(1, b);
    const Taylor f = x * x * y + sin(x * y);
    // f = x^2 y + sin(xy)
    const double s = std::sin(a * b), c = std::cos(a * b);
    EXPECT_NEAR(f.value(), a * a * b + s, 1e-15);
    EXPECT_NEAR(f.derivative({1, 0, 0}), 2 * a * b + b * c, 1e-14);
    EXPECT_NEAR(f.derivative({1, 1, 0}), 2 * a + c - a * b * s, 1e-14);
    EXPECT_NEAR(f.derivative({2, 1, 0}), 2.0 - 2 * b * s - a * b * b * c, 1e-13);
    EXPECT_NEAR(f.derivative({0, 3, 0}), -a * a * a * c, 1e-13);
}

TEST(Taylor, SqrtAndReciprocalInvert) {
    const Taylor x = Taylor::variable(0, 2.0) + Taylor::variable(2, 0.5) * Taylor::variable(0, 2.0);
    const Taylor r = sqrt(x) * sqrt(x) - x;
    const Taylor q = x * reciprocal(x);
    for (int t = 0; t < Taylor::kTerms; ++t) {
        EXPECT_NEAR(r.coeff(t), 0.0, 1e-14);
        EXPECT_NEAR(q.coeff(t), t == 0 ? 1.0 : 0.0, 1e-14);
    }
}

TEST(Taylor, PartialLowersExponent) {
    const Taylor x = Taylor::variable(0, 1.5), z = Taylor::variable(2, -0.5);
    const Taylor f = x * x * z;
    const Taylor fx = f.partial(0);  // 2 x z
    EXPECT_NEAR(fx.value(), 2 * 1.5 * -0.5, 1e-15);
    EXPECT_NEAR(fx.derivative({1, 0, 1}), 2.0, 1e-15);
    EXPECT_NEAR(fx.derivative({0, 0, 1}), 3.0, 1e-15);
}
