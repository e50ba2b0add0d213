#pragma once

// Connection forms of a frame field, the tensors g, lambda, nu read off them,
// and discrete checks of the Pfaffian, structure and curvature identities.
//
// Forms are handled as slices: the matrix omega(xi, eta) = omega_xi^eta(v)
// for one tangent direction v. Frame index layout: 0 = A_0, 1..n-1 = A_i,
// n = A_n, n+1 = A_{n+1}.

#include "lightlike/frame.hpp"

#include <string>
#include <utility>
#include <vector>

namespace lightlike {

struct ConnectionSlice {
    Mat omega;  // omega(xi, eta) = omega_xi^eta(v)
    Mat dg;     // dg_ij(v), evaluated from the metric directly
    Vec v;
};

/// Connection slices along each coordinate axis of x from a frame sample.
/// Throws Error(degeneracy) with the condition number if the frame matrix is singular.
std::vector<ConnectionSlice> connection_slices(const FrameSample& s);

/// omega(v) at x; linear in v.
ConnectionSlice connection_matrix(const FrameField& field, const Vec& x, const Vec& v);

/// Combination sum_k v_k slices[k].
ConnectionSlice combine(const std::vector<ConnectionSlice>& axes, const Vec& v);

/// Reciprocal condition number of the frame matrix (1-norm estimate).
double frame_rcond(const AdaptedFrame& f);

/// Labeled residuals, in a fixed order.
struct ResidualReport {
    std::vector<std::pair<std::string, double>> entries;

    double max() const;
    double at(const std::string& label) const;
    std::vector<std::string> above(double tol) const;
};

/// Violations of the Pfaffian relations of an adapted frame, plus the
/// lightlike condition omega_n^{n+1} = 0 and the tangency omega_0^n = 0.
/// g is the metric at the point of the slice.
ResidualReport pfaffian_residuals(const ConnectionSlice& slice, const Mat& g);

/// Per-point tensors of the lightlike hypersurface.
struct MetricPair {
    Mat g;
    Mat lambda;          // omega_i^n = lambda_ij omega_0^j
    Mat nu;              // omega_i^{n+1} = nu_ij omega_n^j
    double gauge_tag = 0.0;
    bool nu_defined = true;    // false at a focus: omega_n^j are dependent there
    double lambda_asymmetry = 0.0;
    double nu_asymmetry = 0.0;
    double duality_residual = 0.0;  // |nu + g lambda^{-1} g| / max(1, |nu|), NaN when lambda singular
    double coframe_residual = 0.0;  // omega_0^i - g^{ik} nu_kj omega_n^j over all axes
    Mat theta;           // theta(i, k) = omega_0^i(axis k), axes of x
    Mat omega_n;         // omega_n(j, k) = omega_n^j(axis k)
    Mat omega_n0;        // 1 x n row: omega_n^0(axis k)
    Mat omega_00;        // 1 x n row: omega_0^0(axis k)
};

struct ExtractOptions {
    double symmetry_tol = 1e-6;   // asymmetry above this is an error
    double rcond_tol = 1e-10;     // below this the omega_n^j coframe counts as singular
};

/// Reads g, lambda and nu at x from the connection slices along the axes.
/// Throws Error(degeneracy) for asymmetry beyond tolerance and Error(assumption)
/// if nu loses rank.
MetricPair extract_metric_pair(const FrameField& field, const Vec& x, const ExtractOptions& opts = {});
MetricPair metric_pair_from_slices(const std::vector<ConnectionSlice>& slices, const Mat& g, double gauge,
                                   const ExtractOptions& opts = {});

/// Quadratic forms of the hypersurface on tangent vectors in x coordinates.
struct FundamentalForms {
    Mat first;   // n x n: omega_n^T g omega_n
    Mat second;  // n x n: omega_n^T nu omega_n

    double first_of(const Vec& w) const { return w.dot(first * w); }
    double second_of(const Vec& w) const { return w.dot(second * w); }
};

/// Requires mp.nu_defined.
FundamentalForms fundamental_forms(const MetricPair& mp);

/// Direction of the generator in x coordinates: the common null vector of the forms.
Vec generator_direction(const MetricPair& mp);

struct PlaquetteReport {
    double structure = 0.0;  // max |d omega - omega ^ omega|
    ResidualReport curvature;  // the four curvature identities of the hypersurface connection
};

/// Approximates d omega(v, w) at x by the boundary sum over the parameter
/// plaquette of side h centered at x, and compares with the wedge terms at x.
/// With `extrapolate`, plaquettes of side h and h/2 are combined by one
/// Richardson step (fourth order); otherwise the estimate is second order.
/// Throws Error(domain) if the plaquette leaves the chart domain.
PlaquetteReport plaquette_check(const FrameField& field, const Vec& x, const Vec& v, const Vec& w, double h,
                                bool extrapolate = false);

/// The plaquette estimate of d omega(v, w) at x used by plaquette_check.
Mat plaquette_differential(const FrameField& field, const Vec& x, const Vec& v, const Vec& w, double h,
                           bool extrapolate = false);

/// (a ^ b)(v, w) for scalar slices a(v), a(w), b(v), b(w).
inline double wedge(double av, double aw, double bv, double bw) { return av * bw - aw * bv; }

} // namespace lightlike
