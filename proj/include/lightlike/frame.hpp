#pragma once

// Adapted frames of the lightlike hypersurface and frame fields over it.
//
// A point of the hypersurface is addressed by x = (u_1..u_{n-1}, t): u picks
// the generator (the point A_0 = lift of r(u) and the tangent hypersphere
// A_n), t is the position A_n + t A_0 along that generator. The frame at x is
// the default frame at u shifted by the gauge t.

#include "lightlike/chart.hpp"
#include "lightlike/jet.hpp"
#include "lightlike/lorentz.hpp"

#include <functional>
#include <vector>

namespace lightlike {

/// (A_0, A_1..A_{n-1}, A_n, A_{n+1}) as coordinate vectors in the isotropic-pair basis.
struct AdaptedFrame {
    std::vector<Vec> A;

    int n() const noexcept { return static_cast<int>(A.size()) - 2; }
    const Vec& origin() const { return A.front(); }       // A_0
    const Vec& hypersphere() const { return A[A.size() - 2]; } // A_n
    const Vec& conjugate() const { return A.back(); }     // A_{n+1}

    /// Columns are the frame vectors.
    Mat matrix() const;
    /// g_ij = (A_i, A_j).
    Mat metric(const GramMatrix& G) const;
};

/// The frame Gram pattern: (A_0, A_{n+1}) = -1, (A_n, A_n) = 1, (A_i, A_j) = g_ij.
Mat frame_pattern(const Mat& g);

/// A_0, A_i, A_n before completion.
struct PartialFrame {
    Vec A0;
    std::vector<Vec> Ai;
    Vec An;
};

/// Isotropic lift of a jet: A_0 = e_0 + r + |r|^2/2 e_{n+1}, A_i = dA_0/du^i,
/// A_n = m + (r.m) e_{n+1}.
PartialFrame lift_point(const Jet& j);

/// Adds the unique null A_{n+1} orthogonal to A_i and A_n with (A_0, A_{n+1}) = -1.
/// Throws Error(degeneracy) when the conditions are singular.
AdaptedFrame complete_frame(const PartialFrame& p, const GramMatrix& G);

/// A_n -> A_n + s A_0, A_{n+1} -> A_{n+1} + s A_n + s^2/2 A_0.
AdaptedFrame gauge_shift(const AdaptedFrame& f, double s);

/// Frame at x together with its partial derivatives along the coordinate axes of x.
struct FrameSample {
    AdaptedFrame frame;
    std::vector<Mat> d;   // d[k]: derivative of frame.matrix() along axis k
    Mat g;                // first fundamental form at x
    std::vector<Mat> dg;  // dg[k]: derivative of g along axis k, evaluated independently of d
};

class FrameField {
public:
    virtual ~FrameField() = default;

    /// Hypersurface dimension; x has n coordinates.
    virtual int n() const = 0;
    virtual const SurfaceChart& chart() const = 0;
    virtual AdaptedFrame frame(const Vec& x) const = 0;
    virtual Mat metric(const Vec& x) const;

    /// Default: central differences of frame() with step `fd_step()` per axis,
    /// with one Richardson level when `fd_richardson()`.
    virtual FrameSample sample(const Vec& x) const;

    /// Step used by the default sample() along axis k.
    virtual double fd_step(int k) const = 0;
    virtual bool fd_richardson() const { return true; }

    const GramMatrix& gram() const noexcept { return G_; }

protected:
    explicit FrameField(int n) : G_(GramMatrix::isotropic_pair(n)) {}

private:
    GramMatrix G_;
};

enum class FrameDerivatives { analytic, finite_difference };

struct FrameFieldOptions {
    JetOptions jets;
    FrameDerivatives derivatives = FrameDerivatives::analytic;
    double h_rel = 1e-4;      // FD frame step relative to the axis extent
    bool richardson = true;
    double gauge_extent = 1.0; // extent used to scale the step along t
};

/// Frame field induced by a chart. Analytic derivatives come from the jets
/// (A_{n+1} by implicit differentiation of its defining conditions).
class ChartFrameField final : public FrameField {
public:
    ChartFrameField(const SurfaceChart& chart, FrameFieldOptions opts = {});

    int n() const override { return chart_.ambient_dim(); }
    AdaptedFrame frame(const Vec& x) const override;
    FrameSample sample(const Vec& x) const override;
    double fd_step(int k) const override;
    bool fd_richardson() const override { return opts_.richardson; }

    const SurfaceChart& chart() const override { return chart_; }
    const FrameFieldOptions& options() const noexcept { return opts_; }

private:
    const SurfaceChart& chart_;
    FrameFieldOptions opts_;
};

/// Frame field whose A_i are moved to A_i - tau_i(u) A_0, A_{n+1} re-completed.
/// Derivatives by finite differences.
class ScreenFrameField final : public FrameField {
public:
    using Shift = std::function<Vec(const Vec& u)>;

    ScreenFrameField(const ChartFrameField& base, Shift tau, double h_rel = 1e-4, bool richardson = true);

    int n() const override { return base_.n(); }
    const SurfaceChart& chart() const override { return base_.chart(); }
    AdaptedFrame frame(const Vec& x) const override;
    Mat metric(const Vec& x) const override { return base_.metric(x); }
    double fd_step(int k) const override;
    bool fd_richardson() const override { return richardson_; }

private:
    const ChartFrameField& base_;
    Shift tau_;
    double h_rel_;
    bool richardson_;
};

/// x = (u, t).
Vec hypersurface_point(const Vec& u, double t);

} // namespace lightlike
