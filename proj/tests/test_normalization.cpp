#include "lightlike/error.hpp"
#include "lightlike/normalization.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace lightlike;

namespace {

Vec uv(double a, double b) {
    Vec u(2);
    u << a, b;
    return u;
}

// Mean curvature of the default torus (R = 2, r0 = 1) with inward normal.
double torus_mean_curvature(double th) { return 0.5 * (1.0 + std::cos(th) / (2.0 + std::cos(th))); }

} // namespace

TEST(MeanRoot, MatchesVietaAndIsApolar) {
    auto chart = make_chart(default_surface(SurfaceFamily::ellipsoid));
    ChartFrameField field(*chart);
    const MetricPair mp = extract_metric_pair(field, hypersurface_point(uv(0.4, 1.7), 0.8));
    double vieta = 1.0;
    const double lb = mean_root(mp, &vieta);
    EXPECT_LT(vieta, 1e-12);
    EXPECT_LT(trace_free_tensor(mp, lb).apolarity, 1e-10);
}

TEST(MeanRoot, TorusIsMeanCurvature) {
    auto chart = make_chart(default_surface(SurfaceFamily::torus));
    ChartFrameField field(*chart);
    const double th = 1.3;
    const MetricPair mp = extract_metric_pair(field, hypersurface_point(uv(th, 0.2), 0.0));
    EXPECT_NEAR(mean_root(mp), torus_mean_curvature(th), 1e-12);
}

TEST(CrossRatio, HarmonicQuadruple) {
    const Vec a = Vec::Unit(4, 0), b = Vec::Unit(4, 1);
    // (a + b, a - b; a, b) = -1
    EXPECT_NEAR(cross_ratio(a + b, a - b, a, b), -1.0, 1e-15);
    EXPECT_NEAR(cross_ratio(a + 2.0 * b, a + 3.0 * b, a, b), 2.0 / 3.0, 1e-14);
    EXPECT_THROW(cross_ratio(a, b, Vec::Unit(4, 2), a + b), Error);
}

TEST(HarmonicPole, SeparatesOriginFromFoci) {
    auto chart = make_chart(default_surface(SurfaceFamily::torus));
    ChartFrameField field(*chart);
    const Vec x = hypersurface_point(uv(2.2, 0.1), 0.0);
    const MetricPair mp = extract_metric_pair(field, x);
    const PencilSpectrum ps = solve_symmetric_pencil(mp.lambda, mp.g);
    const AdaptedFrame f = field.frame(x);
    const Vec C = harmonic_pole(f, mean_root(mp));
    const Vec B1 = f.hypersphere() + ps.roots(0) * f.origin(), B2 = f.hypersphere() + ps.roots(1) * f.origin();
    EXPECT_NEAR(cross_ratio(B1, B2, C, f.origin()), -1.0, 1e-8);
}

TEST(ThirdOrder, TorusGradientOfMeanCurvature) {
    auto chart = make_chart(default_surface(SurfaceFamily::torus));
    ChartFrameField field(*chart);
    const double th = 0.9;
    const ThirdOrder to = third_order(field, hypersurface_point(uv(th, 1.0), 0.0));
    const double dH = -std::sin(th) / std::pow(2.0 + std::cos(th), 2);
    EXPECT_NEAR(to.lambda_k(0), dH, 1e-10);
    EXPECT_NEAR(to.lambda_k(1), 0.0, 1e-12);
    EXPECT_LT(to.symmetry_defect, 1e-12);
    EXPECT_LT(to.mean_residual, 1e-12);
}

TEST(ThirdOrder, GaugeDoesNotChangeLambdaK) {
    auto chart = make_chart(default_surface(SurfaceFamily::tube_around_curve));
    ChartFrameField field(*chart);
    const Vec u = uv(5.0, 2.5);
    const Vec a = third_order(field, hypersurface_point(u, 0.0)).lambda_k;
    const Vec b = third_order(field, hypersurface_point(u, 2.75)).lambda_k;
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(ThirdOrder, FiniteDifferenceRouteConvergesAtSecondOrder) {
    auto chart = make_chart(default_surface(SurfaceFamily::ellipsoid));
    ChartFrameField field(*chart);
    const Vec x = hypersurface_point(uv(1.2, 2.4), 0.3);
    ThirdOrderOptions o;
    o.route = ThirdOrderRoute::finite_difference;
    double prev_sym = 0.0, prev_mean = 0.0;
    for (double h : {2e-3, 1e-3, 5e-4}) {
        o.h_rel = h;
        const ThirdOrder to = third_order(field, x, o);
        if (prev_sym > 0.0) {
            EXPECT_NEAR(prev_sym / to.symmetry_defect, 4.0, 0.2);
            EXPECT_NEAR(prev_mean / to.mean_residual, 4.0, 0.2);
        }
        prev_sym = to.symmetry_defect;
        prev_mean = to.mean_residual;
    }
}

TEST(ThirdOrder, SphereResidualsVanish) {
    auto chart = make_chart(default_surface(SurfaceFamily::sphere));
    ChartFrameField field(*chart);
    const ThirdOrder to = third_order(field, hypersurface_point(uv(0.8, 3.0), 0.5));
    EXPECT_LT(to.symmetry_defect, 1e-9);
    EXPECT_LT(to.mean_residual, 1e-9);
    EXPECT_LT(to.lambda_k.norm(), 1e-9);
}

TEST(Normalization, UndefinedOnSphere) {
    auto chart = make_chart(default_surface(SurfaceFamily::sphere));
    ChartFrameField field(*chart);
    const NormalizationData nd = normalize_generator(field, hypersurface_point(uv(1.0, 1.0), 0.0), 1.0);
    EXPECT_FALSE(nd.defined);
    EXPECT_NE(nd.undefined_reason.find("normalization undefined"), std::string::npos);
    try {
        normalization_points(field.frame(hypersurface_point(uv(1.0, 1.0), 0.0)), nd.C, nd.tf.a_mixed,
                             nd.third.lambda_k, 1.0);
        FAIL() << "expected a geometry error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::geometry);
    }
}

TEST(Normalization, SubspaceIsGaugeInvariant) {
    auto chart = make_chart(default_surface(SurfaceFamily::torus));
    ChartFrameField field(*chart);
    const Vec u = uv(2.5, 0.5);
    const NormalizationData a = normalize_generator(field, hypersurface_point(u, 0.0), 1.0);
    const NormalizationData b = normalize_generator(field, hypersurface_point(u, -4.0), 1.0);
    ASSERT_TRUE(a.defined && b.defined);
    EXPECT_LT(principal_angle(a.points.zeta, b.points.zeta), 1e-7);
    EXPECT_LT(principal_angle(a.C, b.C), 1e-7);
    EXPECT_LT(max_abs(a.tf.a - b.tf.a), 1e-9);
}

TEST(Normalization, ShiftedScreenLiesInSubspace) {
    auto chart = make_chart(default_surface(SurfaceFamily::ellipsoid));
    ChartFrameField field(*chart);
    const Vec x = hypersurface_point(uv(0.7, 0.3), 0.0);
    const NormalizationData nd = normalize_generator(field, x, 1.0);
    ASSERT_TRUE(nd.defined);
    const AdaptedFrame f = field.frame(x);
    const Mat& Z = nd.points.zeta;
    for (int l = 0; l < 2; ++l) {
        const Vec target = f.A[static_cast<std::size_t>(l + 1)] - nd.tau(l) * f.origin();
        const Vec c = Z.colPivHouseholderQr().solve(target);
        EXPECT_LT((Z * c - target).norm(), 1e-10);
    }
}

TEST(Verdict, Thresholds) {
    EXPECT_EQ(verdict_for(0.5, 1.0), Verdict::integrable);
    EXPECT_EQ(verdict_for(5.0, 1.0), Verdict::indeterminate);
    EXPECT_EQ(verdict_for(11.0, 1.0), Verdict::non_integrable);
}

TEST(Screen, InvariantTorusScreenIsIntegrableAndRotationIsNot) {
    auto chart = make_chart(default_surface(SurfaceFamily::torus));
    ChartFrameField field(*chart);
    auto tau = [&](const Vec& u) { return normalize_generator(field, hypersurface_point(u, 0.0), 1.0).tau; };
    const Vec u = uv(2.0, 1.0);
    const double lb = normalize_generator(field, hypersurface_point(u, 0.0), 1.0).lambda_bar;
    const Vec x = hypersurface_point(u, lb);

    ScreenFrameField invariant(field, tau);
    const ScreenResult a = screen_mu(invariant, x);
    EXPECT_EQ(a.verdict, Verdict::integrable);
    EXPECT_TRUE(a.agree);

    ScreenFrameField rotated(field, [&](const Vec& v) {
        Vec t = tau(v);
        t(0) += 0.2 * v(1);
        t(1) -= 0.2 * v(0);
        return t;
    });
    const ScreenResult b = screen_mu(rotated, x);
    EXPECT_EQ(b.verdict, Verdict::non_integrable);
    EXPECT_TRUE(b.agree);
    EXPECT_NEAR(b.frobenius, b.asymmetry, 1e-6 * b.asymmetry);
}

TEST(Screen, ShiftedScreenKeepsAdaptedGram) {
    auto chart = make_chart(default_surface(SurfaceFamily::ellipsoid));
    ChartFrameField field(*chart);
    const ScreenFrameField screen(field, [](const Vec& u) {
        Vec t(2);
        t << 0.3 + u(0), -1.2 * u(1);
        return t;
    });
    const Vec x = hypersurface_point(uv(0.7, 0.3), 0.4);
    const AdaptedFrame base = field.frame(x), shifted = screen.frame(x);
    const Mat pattern = frame_pattern(extract_metric_pair(field, x).g);
    EXPECT_LT(max_abs(validate_gram(shifted.A, field.gram(), pattern)), 1e-10);
    EXPECT_GT((shifted.A[1] - base.A[1]).norm(), 0.1);
}
