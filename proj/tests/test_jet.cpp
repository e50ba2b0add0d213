#include "lightlike/chart.hpp"
#include "lightlike/error.hpp"
#include "lightlike/jet.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace lightlike;

namespace {

ParamGrid grid_for(const SurfaceChart& c, std::vector<int> counts) { return ParamGrid{std::move(counts), c.domain()}; }

} // namespace

TEST(SampleChart, SphereNormalsAreRadial) {
    auto chart = make_chart(default_surface(SurfaceFamily::sphere));
    const auto jets = sample_chart(*chart, grid_for(*chart, {16, 16}));
    ASSERT_EQ(jets.size(), 256u);
    for (const auto& j : jets) {
        EXPECT_NEAR(j.r().norm(), 1.0, 1e-14);
        EXPECT_LT((j.m() + j.r()).norm(), 1e-13);
        EXPECT_NEAR(j.m().norm(), 1.0, 1e-12);
        for (int i = 0; i < 2; ++i) EXPECT_LT(std::abs(j.m().dot(j.dr(i))), 1e-13);
    }
}

TEST(SampleChart, CoarseGridRejected) {
    auto chart = make_chart(default_surface(SurfaceFamily::torus));
    EXPECT_THROW(sample_chart(*chart, grid_for(*chart, {4, 16})), Error);
}

TEST(Jet, SphereSecondFormIsScaledFirstForm) {
    SurfaceSpec s = default_surface(SurfaceFamily::sphere);
    s.params["rho"] = 2.5;
    auto chart = make_chart(s);
    Vec u(2);
    u << 1.1, 0.4;
    const Jet j = compute_jet(*chart, u);
    EXPECT_LT(max_abs(j.second_form() - j.first_form() / 2.5), 1e-14);
}

TEST(Jet, TorusOuterEquatorNormalPointsToCore) {
    auto chart = make_chart(default_surface(SurfaceFamily::torus));
    Vec u(2);
    u << 0.0, 0.0;
    const Jet j = compute_jet(*chart, u);
    EXPECT_LT((j.r() - Vec::Unit(3, 0) * 3.0).norm(), 1e-15);
    EXPECT_LT((j.m() + Vec::Unit(3, 0)).norm(), 1e-15);
}

TEST(Jet, GraphAtCriticalPoint) {
    auto chart = make_chart(default_surface(SurfaceFamily::graph));
    const Jet j = compute_jet(*chart, Vec::Zero(2));
    EXPECT_LT((j.m() - Vec::Unit(3, 2)).norm(), 1e-15);
    EXPECT_NEAR(j.second_form()(0, 0), 2.0, 1e-14);
}

TEST(Jet, FiniteDifferenceMatchesClosedFormOnTorus) {
    auto chart = make_chart(default_surface(SurfaceFamily::torus));
    JetOptions fd;
    fd.mode = JetMode::finite_difference;
    Vec u(2);
    u << 0.7, 2.1;
    const Jet a = compute_jet(*chart, u);
    const Jet b = compute_jet(*chart, u, 3, fd);
    EXPECT_TRUE(a.closed_form());
    EXPECT_FALSE(b.closed_form());
    for (int i = 0; i < 2; ++i) {
        EXPECT_LT((a.dr(i) - b.dr(i)).norm(), 1e-7);
        EXPECT_LT((a.dm(i) - b.dm(i)).norm(), 1e-7);
        for (int k = 0; k < 2; ++k) {
            EXPECT_LT((a.d2r(i, k) - b.d2r(i, k)).norm(), 1e-7);
            for (int l = 0; l < 2; ++l) EXPECT_LT((a.d3r(i, k, l) - b.d3r(i, k, l)).norm(), 1e-7);
        }
    }
}

TEST(Jet, MixedPartialSymmetryOnTable) {
    auto torus = make_chart(default_surface(SurfaceFamily::ellipsoid));
    auto table = make_chart(tabulate(*torus, {60, 60}));
    JetOptions fd;
    fd.fd.h_rel = 1e-3;
    fd.fd.h3_rel = 1e-3;
    Vec u(2);
    u << 1.3, 2.0;
    const Jet j = compute_jet(*table, u, 3, fd);
    // mixed partials assembled from one stencil; compare with the swapped-order evaluation
    EXPECT_LT((j.d2r(0, 1) - j.d2r(1, 0)).norm(), 1e-6);
    const Jet exact = compute_jet(*torus, u);
    EXPECT_LT((j.d2r(0, 1) - exact.d2r(0, 1)).norm(), 1e-3);
}

TEST(Jet, BoundaryMarginIsDomainError) {
    auto chart = make_chart(default_surface(SurfaceFamily::graph));
    JetOptions fd;
    fd.mode = JetMode::finite_difference;
    Vec u(2);
    u << 1.0 - 1e-6, 0.0;
    try {
        compute_jet(*chart, u, 3, fd);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::domain);
    }
}

TEST(Jet, PoleIsNotImmersed) {
    SurfaceSpec s = default_surface(SurfaceFamily::sphere);
    s.domain = ParamBox{{0.0, 0.0}, {std::numbers::pi, 2 * std::numbers::pi}, {false, true}};
    auto chart = make_chart(s);
    try {
        compute_jet(*chart, Vec::Zero(2));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::geometry);
        EXPECT_NE(std::string(e.what()).find("u = (0, 0)"), std::string::npos);
    }
}

TEST(ParamGrid, RowMajorCellCenters) {
    ParamGrid g{{8, 10}, ParamBox{{0.0, 0.0}, {8.0, 1.0}, {false, true}}};
    EXPECT_EQ(g.size(), 80u);
    EXPECT_EQ(g.flat({2, 3}), 23u);
    EXPECT_EQ(g.index(23), (std::vector<int>{2, 3}));
    EXPECT_DOUBLE_EQ(g.point(23)(0), 2.5);
    EXPECT_DOUBLE_EQ(g.point(23)(1), 0.35);
    EXPECT_EQ(g.ring(g.flat({0, 5})), 0);
    EXPECT_EQ(g.ring(g.flat({3, 0})), 3);
}
