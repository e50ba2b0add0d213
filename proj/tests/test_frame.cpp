#include "lightlike/cartan.hpp"
#include "lightlike/error.hpp"
#include "lightlike/frame.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace lightlike;

namespace {

Vec uv(double a, double b) {
    Vec u(2);
    u << a, b;
    return u;
}

std::unique_ptr<SurfaceChart> chart_of(SurfaceFamily f) { return make_chart(default_surface(f)); }

} // namespace

TEST(Lift, InnerProductIsHalfSquaredDistance) {
    auto chart = chart_of(SurfaceFamily::torus);
    const GramMatrix G = GramMatrix::isotropic_pair(3);
    const Jet a = compute_jet(*chart, uv(0.3, 1.2), 1), b = compute_jet(*chart, uv(2.1, -0.7), 1);
    const double lhs = inner_product(lift_point(a).A0, lift_point(b).A0, G);
    EXPECT_NEAR(lhs, -0.5 * (a.r() - b.r()).squaredNorm(), 1e-13);
    EXPECT_NEAR(inner_product(lift_point(a).A0, lift_point(a).A0, G), 0.0, 1e-14);
}

TEST(Frame, CompletedFrameHasAdaptedGram) {
    auto chart = chart_of(SurfaceFamily::ellipsoid);
    ChartFrameField field(*chart);
    const Vec x = hypersurface_point(uv(0.9, 2.0), 0.0);
    const AdaptedFrame f = field.frame(x);
    const Mat g = field.metric(x);
    EXPECT_LT(max_abs(validate_gram(f.A, field.gram(), frame_pattern(g))), 1e-12);
    for (double s : {-4.5, 0.7, 3.9}) {
        const AdaptedFrame h = gauge_shift(f, s);
        EXPECT_LT(max_abs(validate_gram(h.A, field.gram(), frame_pattern(g))), 1e-10) << "s = " << s;
    }
}

TEST(Frame, TorusMetricIsDiagonal) {
    auto chart = chart_of(SurfaceFamily::torus);
    ChartFrameField field(*chart);
    const double th = 0.8;
    const Mat g = field.metric(hypersurface_point(uv(th, 1.5), 0.0));
    EXPECT_NEAR(g(0, 0), 1.0, 1e-14);
    EXPECT_NEAR(g(1, 1), std::pow(2.0 + std::cos(th), 2), 1e-13);
    EXPECT_NEAR(g(0, 1), 0.0, 1e-14);
}

TEST(Frame, GraphOriginFrameIsTheBasis) {
    auto chart = chart_of(SurfaceFamily::graph);
    ChartFrameField field(*chart);
    const AdaptedFrame f = field.frame(Vec::Zero(3));
    EXPECT_LT((f.origin() - Vec::Unit(5, 0)).norm(), 1e-15);
    EXPECT_LT((f.conjugate() - Vec::Unit(5, 4)).norm(), 1e-14);
    EXPECT_LT((f.hypersphere() - Vec::Unit(5, 3)).norm(), 1e-15);
}

TEST(Frame, AnalyticDerivativesMatchFiniteDifferences) {
    auto chart = chart_of(SurfaceFamily::tube_around_curve);
    ChartFrameField analytic(*chart);
    FrameFieldOptions o;
    o.derivatives = FrameDerivatives::finite_difference;
    ChartFrameField fd(*chart, o);
    const Vec x = hypersurface_point(uv(3.0, 1.0), 0.4);
    const FrameSample a = analytic.sample(x), b = fd.sample(x);
    for (std::size_t k = 0; k < a.d.size(); ++k) EXPECT_LT(max_abs(a.d[k] - b.d[k]), 1e-7) << "axis " << k;
}

TEST(Connection, SlicesAreLinearInDirection) {
    auto chart = chart_of(SurfaceFamily::torus);
    ChartFrameField field(*chart);
    const Vec x = hypersurface_point(uv(0.5, 0.5), 0.2);
    Vec v1(3), v2(3);
    v1 << 1.0, -0.5, 0.25;
    v2 << 0.0, 2.0, -1.0;
    const Mat lhs = connection_matrix(field, x, v1 + 2.0 * v2).omega;
    const Mat rhs = connection_matrix(field, x, v1).omega + 2.0 * connection_matrix(field, x, v2).omega;
    EXPECT_LT(max_abs(lhs - rhs), 1e-13);
}

TEST(Connection, PfaffianRelationsHoldOnClosedFormFrames) {
    for (auto fam : {SurfaceFamily::torus, SurfaceFamily::sphere, SurfaceFamily::ellipsoid, SurfaceFamily::graph}) {
        auto chart = chart_of(fam);
        ChartFrameField field(*chart);
        const ParamGrid grid{{8, 8}, chart->domain()};
        const Vec x = hypersurface_point(grid.point(27), -1.3);
        const FrameSample s = field.sample(x);
        for (const auto& slice : connection_slices(s))
            EXPECT_LT(pfaffian_residuals(slice, s.g).max(), 1e-8) << to_string(fam);
    }
}

TEST(Connection, InjectedFaultIsFlaggedByLabel) {
    auto chart = chart_of(SurfaceFamily::torus);
    ChartFrameField field(*chart);
    const Vec x = hypersurface_point(uv(0.5, 0.5), 0.0);
    ConnectionSlice slice = connection_matrix(field, x, Vec::Unit(3, 0));
    slice.omega(3, 3) = 1.0;
    const auto bad = pfaffian_residuals(slice, field.metric(x)).above(1e-8);
    EXPECT_NE(std::find(bad.begin(), bad.end(), "omega_n^n"), bad.end());
}

TEST(MetricPair, SphereLambdaIsScaledMetric) {
    SurfaceSpec spec = default_surface(SurfaceFamily::sphere);
    spec.params["rho"] = 2.5;
    auto chart = make_chart(spec);
    ChartFrameField field(*chart);
    const MetricPair mp = extract_metric_pair(field, hypersurface_point(uv(1.0, 2.0), 0.0));
    EXPECT_LT(max_abs(mp.lambda - mp.g / 2.5), 1e-12);
    EXPECT_LT(max_abs(mp.nu + 2.5 * mp.g), 1e-10);
}

TEST(MetricPair, GaugeShiftSubtractsMetric) {
    auto chart = chart_of(SurfaceFamily::ellipsoid);
    ChartFrameField field(*chart);
    const Vec u = uv(1.1, 0.6);
    const MetricPair base = extract_metric_pair(field, hypersurface_point(u, 0.0));
    for (double s : {-3.0, 1.25, 4.0}) {
        const MetricPair mp = extract_metric_pair(field, hypersurface_point(u, s));
        EXPECT_LT(max_abs(mp.lambda - (base.lambda - s * base.g)), 1e-10);
    }
}

TEST(MetricPair, NuIsDualToLambda) {
    auto chart = chart_of(SurfaceFamily::tube_around_curve);
    ChartFrameField field(*chart);
    const MetricPair mp = extract_metric_pair(field, hypersurface_point(uv(2.0, 0.3), 0.1));
    EXPECT_LT(max_abs(mp.nu + mp.g * mp.lambda.inverse() * mp.g) / std::max(1.0, max_abs(mp.nu)), 1e-7);
    EXPECT_LT(mp.coframe_residual, 1e-8);
}

TEST(MetricPair, NuUndefinedAtFocus) {
    auto chart = chart_of(SurfaceFamily::torus);
    ChartFrameField field(*chart);
    const MetricPair mp = extract_metric_pair(field, hypersurface_point(uv(0.0, 0.0), 1.0));
    EXPECT_FALSE(mp.nu_defined);
    EXPECT_THROW(fundamental_forms(mp), Error);
}

TEST(FundamentalForms, TorusPrincipalRatios) {
    // Outer equator: principal curvatures 1/3 (parallel) and 1 (meridian).
    auto chart = chart_of(SurfaceFamily::torus);
    ChartFrameField field(*chart);
    const MetricPair mp = extract_metric_pair(field, hypersurface_point(uv(0.0, 0.0), 0.0));
    const FundamentalForms ff = fundamental_forms(mp);
    const Vec gen = generator_direction(mp);
    EXPECT_LT(std::abs(ff.first_of(gen)), 1e-12);
    EXPECT_LT((ff.first * gen).norm(), 1e-12);
    EXPECT_NEAR(ff.second_of(Vec::Unit(3, 0)) / ff.first_of(Vec::Unit(3, 0)), -1.0, 1e-10);
    EXPECT_NEAR(ff.second_of(Vec::Unit(3, 1)) / ff.first_of(Vec::Unit(3, 1)), -3.0, 1e-10);
}

TEST(Plaquette, StructureEquationConvergesAtSecondOrder) {
    auto chart = chart_of(SurfaceFamily::ellipsoid);
    ChartFrameField field(*chart);
    const Vec x = hypersurface_point(uv(1.0, 1.0), 0.3);
    const Vec v = Vec::Unit(3, 0), w = Vec::Unit(3, 1) + 0.5 * Vec::Unit(3, 2);
    const double r1 = plaquette_check(field, x, v, w, 0.02).structure;
    const double r2 = plaquette_check(field, x, v, w, 0.01).structure;
    const double r3 = plaquette_check(field, x, v, w, 0.005).structure;
    EXPECT_GT(r1 / r2, 3.0);
    EXPECT_LT(r1 / r2, 5.0);
    EXPECT_GT(r2 / r3, 3.0);
    EXPECT_LT(r2 / r3, 5.0);
    EXPECT_LT(plaquette_check(field, x, v, w, 0.01, true).structure, 1e-6);
}

TEST(Plaquette, LeavingDomainIsDomainError) {
    auto chart = chart_of(SurfaceFamily::graph);
    ChartFrameField field(*chart);
    const Vec x = hypersurface_point(Vec::Constant(2, chart->domain().hi[0] - 1e-3), 0.0);
    try {
        plaquette_check(field, x, Vec::Unit(3, 0), Vec::Unit(3, 1), 0.01);
        FAIL() << "expected a domain error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::domain);
    }
}
