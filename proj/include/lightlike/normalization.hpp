#pragma once

// Third-order invariants of a generator: mean root, trace-free tensor, harmonic
// pole, lambda_ijk and lambda_k, the normalization points C_i spanning the
// normalizing subspace, and the integrability test of the induced screen.

#include "lightlike/cartan.hpp"
#include "lightlike/singular.hpp"

#include <string>
#include <vector>

namespace lightlike {

/// lambda = g^{ij} lambda_ij / (n-1). If `vieta_defect` is given it receives
/// |lambda - mean of the pencil roots|.
double mean_root(const MetricPair& mp, double* vieta_defect = nullptr);

struct TraceFree {
    Mat a;            // a_ij = lambda_ij - lambda g_ij
    Mat a_mixed;      // a^i_j = g^{ik} a_kj
    double apolarity = 0.0;  // |a_ij g^{ij}|
};

TraceFree trace_free_tensor(const MetricPair& mp, double lambda_bar);

/// C = A_n + lambda A_0.
Vec harmonic_pole(const AdaptedFrame& frame, double lambda_bar);

/// Cross-ratio (P1, P2; P3, P4) of four points on one projective line.
/// Throws Error(input) if the points do not span a line.
double cross_ratio(const Vec& p1, const Vec& p2, const Vec& p3, const Vec& p4);

enum class ThirdOrderRoute {
    jets,              // d lambda_ij from third-order jets of the chart
    finite_difference  // d lambda_ij by central differences of the extracted lambda field
};

struct ThirdOrderOptions {
    ThirdOrderRoute route = ThirdOrderRoute::jets;
    double h_rel = 1e-4;  // finite-difference route step, relative to the axis extent
};

struct ThirdOrder {
    std::vector<Mat> lambda_ijk;  // lambda_ijk[k](i, j)
    Vec lambda_k;
    double symmetry_defect = 0.0;   // max |lambda_ijk - lambda_(ijk)|
    double mean_residual = 0.0;     // max |d lambda + lambda omega_0^0 + omega_n^0 - lambda_k omega_0^k|
};

/// Covariant derivative of lambda along the coordinate axes at x, read in the
/// omega_0 basis. The jets route needs a chart frame field.
ThirdOrder third_order(const FrameField& field, const Vec& x, const ThirdOrderOptions& opts = {});

struct NormalizationPoints {
    std::vector<Vec> Ci;   // C_i = lambda_i A_0 - a^j_i A_j
    Mat zeta;              // columns C_i
    Mat tangent_W;         // columns C, C_i
    double screen_det = 0.0;  // det of the A_j block of the C_i
};

/// Throws Error(geometry) "normalization undefined" when a^i_j is degenerate
/// (smallest singular value below `degenerate_tol` * scale).
NormalizationPoints normalization_points(const AdaptedFrame& frame, const Vec& C, const Mat& a_mixed,
                                         const Vec& lambda_k, double scale, double degenerate_tol = 1e-8);

/// Shift tau with A_i - tau_i A_0 in span{C_j}: tau_l = lambda_i (M^{-1})_{il}, M = a^j_i.
Vec screen_shift(const Mat& a_mixed, const Vec& lambda_k);

/// Largest principal angle (radians) between the column spans of a and b.
double principal_angle(const Mat& a, const Mat& b);

enum class Verdict { integrable, non_integrable, indeterminate };
const char* to_string(Verdict v);

struct ScreenResult {
    Mat mu;            // omega_i^0 = mu_ij omega_n^j + mu_i omega_n^0
    Vec mu_vec;        // mu_i
    double asymmetry = 0.0;   // max |mu_ij - mu_ji|
    double frobenius = 0.0;   // max |(omega_n^0 ^ d omega_n^0)(e_0, e_i, e_j)|
    double tolerance = 0.0;
    Verdict verdict = Verdict::indeterminate;            // from the asymmetry of mu
    Verdict frobenius_verdict = Verdict::indeterminate;  // from the plaquette value
    bool agree = false;
};

struct ScreenOptions {
    double rel_tol = 1e-5;     // tolerance = rel_tol * max(1, |mu|)
    double plaquette_h = 1e-3; // relative to the largest parameter extent
    bool extrapolate = true;
};

/// mu at x for a screen-adapted frame field; the Frobenius residual uses a
/// plaquette of d omega_n^0 over the dual frame of (omega_n^0, omega_n^i).
ScreenResult screen_mu(const FrameField& screen, const Vec& x, const ScreenOptions& opts = {});

Verdict verdict_for(double value, double tol);

/// All invariants of one generator.
struct NormalizationData {
    double lambda_bar = 0.0;
    double vieta_defect = 0.0;
    TraceFree tf;
    Vec C;
    ThirdOrder third;
    bool defined = false;       // false where a_ij is degenerate
    std::string undefined_reason;
    NormalizationPoints points;
    Vec tau;
};

/// x = (u, t). Third-order quantities and C_i are computed when a_ij is nondegenerate.
NormalizationData normalize_generator(const FrameField& field, const Vec& x, double scale,
                                      const ThirdOrderOptions& opts = {});

} // namespace lightlike
