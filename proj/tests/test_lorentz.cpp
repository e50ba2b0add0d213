#include "lightlike/error.hpp"
#include "lightlike/lorentz.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace lightlike;

namespace {

Mat random_spd(std::mt19937_64& rng, int k) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    Mat a(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) a(i, j) = U(rng);
    return a * a.transpose() + 0.1 * Mat::Identity(k, k);
}

Mat random_symmetric(std::mt19937_64& rng, int k) {
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    Mat a(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = U(rng);
    return a;
}

} // namespace

TEST(GramMatrix, IsotropicPairHasLorentzSignature) {
    const auto G = GramMatrix::isotropic_pair(3);
    EXPECT_EQ(G.dim(), 5);
    EXPECT_EQ(G.entries()(0, 4), -1.0);
    EXPECT_EQ(G.entries()(2, 2), 1.0);
}

TEST(GramMatrix, RejectsEuclideanSignature) {
    EXPECT_THROW(GramMatrix(Mat::Identity(4, 4)), Error);
}

TEST(InnerProduct, SwapIsBitIdentical) {
    const auto G = GramMatrix::isotropic_pair(4);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> N;
    for (int t = 0; t < 100; ++t) {
        Vec u(6), v(6);
        for (int k = 0; k < 6; ++k) {
            u(k) = N(rng);
            v(k) = N(rng);
        }
        EXPECT_EQ(inner_product(u, v, G), inner_product(v, u, G));
    }
}

TEST(InnerProduct, DimensionMismatchIsUsageError) {
    const auto G = GramMatrix::isotropic_pair(3);
    try {
        inner_product(Vec::Zero(5), Vec::Zero(4), G);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::usage);
    }
}

TEST(InnerProduct, NullPairProducts) {
    const auto G = GramMatrix::isotropic_pair(3);
    const Vec e0 = Vec::Unit(5, 0), e4 = Vec::Unit(5, 4);
    EXPECT_EQ(inner_product(e0, e0, G), 0.0);
    EXPECT_EQ(inner_product(e0, e4, G), -1.0);
}

TEST(CausalCharacter, BasicSpans) {
    const auto G = GramMatrix::isotropic_pair(3);
    std::vector<Vec> a{Vec::Unit(5, 1)};
    EXPECT_EQ(causal_character(a, G), CausalCharacter::spacelike);
    std::vector<Vec> b{Vec::Unit(5, 0)};
    EXPECT_EQ(causal_character(b, G), CausalCharacter::lightlike);
    std::vector<Vec> c{Vec::Unit(5, 0), Vec::Unit(5, 4)};
    EXPECT_EQ(causal_character(c, G), CausalCharacter::timelike);
    std::vector<Vec> d{Vec::Unit(5, 0), Vec::Unit(5, 2)};
    EXPECT_EQ(causal_character(d, G), CausalCharacter::lightlike);
}

TEST(CausalCharacter, DependentBasisIsNotLightlike) {
    const auto G = GramMatrix::isotropic_pair(3);
    std::vector<Vec> a{Vec::Unit(5, 1), 2.0 * Vec::Unit(5, 1)};
    try {
        causal_character(a, G);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::degeneracy);
    }
}

TEST(CausalCharacter, InvariantUnderRescalingAndBasisChange) {
    const auto G = GramMatrix::isotropic_pair(3);
    const Vec x = Vec::Unit(5, 0) + 0.3 * Vec::Unit(5, 4);
    const Vec y = Vec::Unit(5, 2);
    std::vector<Vec> a{x, y};
    std::vector<Vec> b{7.0 * x, 0.01 * (x + y)};
    EXPECT_EQ(causal_character(a, G), causal_character(b, G));
}

TEST(Pencil, FlatAndUmbilic) {
    const Mat g = Mat::Identity(2, 2);
    auto s0 = solve_symmetric_pencil(Mat::Zero(2, 2), g);
    EXPECT_EQ(s0.roots(0), 0.0);
    EXPECT_EQ(s0.roots(1), 0.0);
    Mat gg(2, 2);
    gg << 2.0, 0.5, 0.5, 1.0;
    auto s1 = solve_symmetric_pencil(gg, gg);
    EXPECT_NEAR(s1.roots(0), 1.0, 1e-14);
    EXPECT_NEAR(s1.roots(1), 1.0, 1e-14);
}

TEST(Pencil, RandomPairsDiagonalize) {
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 200; ++t) {
        const int k = 1 + t % 8;
        const Mat g = random_spd(rng, k), L = random_symmetric(rng, k);
        const auto s = solve_symmetric_pencil(L, g);
        ASSERT_EQ(s.roots.size(), k);
        for (int i = 1; i < k; ++i) EXPECT_LE(s.roots(i - 1), s.roots(i));
        const Mat V = s.eigvecs;
        EXPECT_LT(max_abs(V.transpose() * g * V - Mat::Identity(k, k)), 1e-10);
        Mat D = s.roots.asDiagonal();
        EXPECT_LT(max_abs(V.transpose() * L * V - D), 1e-10 * std::max(1.0, s.roots.cwiseAbs().maxCoeff()));
        for (int c = 0; c < k; ++c) {
            Eigen::Index idx;
            V.col(c).cwiseAbs().maxCoeff(&idx);
            EXPECT_GT(V(idx, c), 0.0);
        }
    }
}

TEST(Pencil, NotSpdNamesLeadingMinor) {
    Mat g(2, 2);
    g << 1.0, 2.0, 2.0, 1.0;
    try {
        solve_symmetric_pencil(Mat::Zero(2, 2), g);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::input);
        EXPECT_NE(std::string(e.what()).find("order 2"), std::string::npos);
    }
}

TEST(Pencil, AsymmetricLIsInputError) {
    Mat L(2, 2);
    L << 0.0, 1.0, 0.0, 0.0;
    try {
        solve_symmetric_pencil(L, Mat::Identity(2, 2));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::input);
    }
}

// Torus (R, r0) at the outer equator, from the explicit parametrization
// ((R + r0 cos t) cos p, (R + r0 cos t) sin p, r0 sin t) with inward normal.
TEST(Pencil, TorusOuterEquatorMatchesShapeOperator) {
    const double R = 2.0, r0 = 1.0;
    Mat I(2, 2), II(2, 2);
    I << r0 * r0, 0.0, 0.0, (R + r0) * (R + r0);
    // r_tt = -r0 (cos t cos p, cos t sin p, sin t) = (-r0, 0, 0); r_pp = -(R + r0)(1, 0, 0); m = (-1, 0, 0)
    II << r0, 0.0, 0.0, R + r0;
    const Mat W = I.inverse() * II;
    const double tr = W.trace(), det = W.determinant();
    const double k1 = 0.5 * (tr - std::sqrt(tr * tr - 4 * det)), k2 = 0.5 * (tr + std::sqrt(tr * tr - 4 * det));
    const auto s = solve_symmetric_pencil(II, I);
    EXPECT_NEAR(s.roots(0), k1, 1e-14);
    EXPECT_NEAR(s.roots(1), k2, 1e-14);
    EXPECT_NEAR(s.roots(0), 1.0 / 3.0, 1e-14);
    EXPECT_NEAR(s.roots(1), 1.0, 1e-14);
}

TEST(PolarHyperplane, ContainsConjugatePoints) {
    const auto G = GramMatrix::isotropic_pair(3);
    const Vec x = Vec::Unit(5, 3);
    const Vec h = polar_hyperplane(x, G);
    EXPECT_EQ(h.dot(Vec::Unit(5, 0)), 0.0);
    EXPECT_EQ(h.dot(Vec::Unit(5, 4)), 0.0);
    const Vec a0 = Vec::Unit(5, 0);
    const Vec h0 = polar_hyperplane(a0, G);
    EXPECT_EQ(h0.dot(a0), 0.0);
    EXPECT_NE(h0.dot(Vec::Unit(5, 4)), 0.0);
    EXPECT_THROW(polar_hyperplane(Vec::Zero(5), G), Error);
}

TEST(ValidateGram, ScaledVectorResidual) {
    const auto G = GramMatrix::isotropic_pair(3);
    std::vector<Vec> f;
    for (int k = 0; k < 5; ++k) f.push_back(Vec::Unit(5, k));
    EXPECT_EQ(max_abs(validate_gram(f, G, G.entries())), 0.0);
    f[3] *= 2.0;
    EXPECT_EQ(validate_gram(f, G, G.entries())(3, 3), 3.0);
}
