#pragma once

// Foci on the generators: roots of det(lambda - s g) = 0, their focus points
// B_h = A_n + s_h A_0, fold/conic classification and focal manifolds.

#include "lightlike/cartan.hpp"
#include "lightlike/jet.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lightlike {

enum class FocusClass { unset, fold, conic, indeterminate };
const char* to_string(FocusClass c);

struct FocusRecord {
    double root = 0.0;       // s_h in the gauge of the frame it came from
    Vec focus;               // B_h = A_n + s_h A_0
    int multiplicity = 1;
    Mat eigenspace;          // (n-1) x m, g-orthonormal columns in omega_0 coordinates
    FocusClass cls = FocusClass::unset;
    Vec drift;               // s_{1i} in omega_0 coordinates (simple roots)
    double s11 = 0.0;        // drift along the unit eigendirection
    bool on_quadric = false; // (B, B) ~ 0
};

struct RootGrouping {
    std::vector<std::vector<int>> groups;  // indices into the sorted roots
    bool ambiguous = false;
    double scale = 0.0;
};

/// Groups sorted roots whose consecutive gaps are below tol_rel * scale, with
/// scale = max(max |root|, scale_floor). The grouping is ambiguous when some gap
/// between groups is below tol_gap * scale.
RootGrouping cluster_roots(const Vec& roots, double tol_rel = 1e-6, double tol_gap = 1e-3, double scale_floor = 0.0);

struct SingularOptions {
    double scale = 0.0;       // curvature scale; 0 = chart nominal scale
    double tol_rel = 1e-6;
    double tol_gap = 1e-3;
    double eps_fold = 1e-4;   // |s11| > eps_fold * scale^2 -> fold
    double eps_conic = 1e-6;  // |s11| < eps_conic * scale^2 -> conic
    double overlap = 0.7;     // eigendirection overlap for root continuation
    double h_rel = 1e-3;      // continuation step relative to the axis extent
    double rank_tol = 1e-5;   // normalized singular values above this count
    double rank_band_lo = 1e-6;
    double rank_band_hi = 1e-4;
    double causal_tol = 1e-7;
};

/// Normalizes a homogeneous point: e_0 coefficient 1 when it is not tiny,
/// unit Euclidean norm with positive largest component otherwise.
Vec normalize_homogeneous(const Vec& x, double tiny = 1e-9);

struct FocusSpectrum {
    PencilSpectrum pencil;
    RootGrouping grouping;
    std::vector<FocusRecord> foci;  // one per root group, ascending
};

/// Pencil roots of (lambda, g) grouped by multiplicity, one record per group.
FocusSpectrum focus_spectrum(const MetricPair& mp, const AdaptedFrame& frame, const GramMatrix& G,
                             double tol_rel = 1e-6, double tol_gap = 1e-3, double scale_floor = 0.0);

/// Everything known about one generator.
struct GeneratorData {
    Vec x;                   // (u, t)
    AdaptedFrame frame;
    MetricPair mp;
    PencilSpectrum spectrum;
    RootGrouping grouping;
    std::vector<FocusRecord> foci;
};

GeneratorData analyze_generator(const FrameField& field, const Vec& x, const SingularOptions& opts = {});

/// The focus of the branch of `rec` at the nearby point x2.
/// Throws Error(branch_tracking) if no root there continues it.
FocusRecord continue_focus(const FrameField& field, const FocusRecord& rec, const Mat& g, const Vec& x2,
                           const SingularOptions& opts = {});

/// Sets rec.cls, rec.drift and rec.s11. Multiple roots are conic without a drift test.
void fold_conic_classify(const FrameField& field, const GeneratorData& gd, FocusRecord& rec,
                         const SingularOptions& opts = {});

struct FocalRank {
    int est_dim = 0;
    bool ambiguous = false;
    Vec singular_values;       // normalized, descending
    std::vector<Vec> tangent;  // ambient tangent vectors of the focal set at B
    CausalCharacter causal = CausalCharacter::spacelike;
    bool causal_defined = true;  // false for a point focal set
};

/// Numerical rank of the differential of u -> B_h(u), in frame coordinates over
/// g-orthonormal directions with the A_0 coefficient scaled by 1/scale^2 and the
/// others by 1/scale. The tangent space span{B, dB} gets a causal character.
FocalRank focal_jacobian_rank(const FrameField& field, const GeneratorData& gd, const FocusRecord& rec,
                              const SingularOptions& opts = {});

struct FocalSample {
    std::size_t index = 0;  // flat grid index
    FocusRecord record;
    FocalRank rank;
    bool tracked = true;    // false when continuation failed here
    std::string note;
};

struct BranchEvent {
    std::size_t index = 0;
    std::string kind;    // "split", "merge", "swap", "tracking"
    std::string detail;
};

struct FocalManifold {
    int branch = 0;
    int multiplicity = 1;
    std::vector<FocalSample> samples;
    int est_dim = 0;          // majority over interior samples
    FocusClass cls = FocusClass::unset;  // majority over interior samples
    double spacelike_fraction = 0.0;
    double timelike_fraction = 0.0;
    double lightlike_fraction = 0.0;
    int interior_count = 0;
    int agreement_failures = 0;  // unambiguous samples where class and rank disagree
};

struct FocalResult {
    std::vector<FocalManifold> branches;
    std::vector<BranchEvent> events;
};

/// Interior = at least `ring` cells from a bounded edge of the grid.
FocalResult focal_manifold(const FrameField& field, const ParamGrid& grid, const std::vector<GeneratorData>& data,
                           const SingularOptions& opts = {}, int ring = 2);

/// Expected focal dimension for a class.
int expected_focal_dim(FocusClass cls, int multiplicity, int n);

struct DegeneracyReport {
    std::vector<int> nu_rank;  // per grid point
    bool full_rank = true;
    bool extreme_case = false; // one constant root of multiplicity n-1: hypersphere / isotropic cone
    int singular_lambda_points = 0;
    std::string summary;
};

DegeneracyReport degeneracy_report(const FrameField& field, const std::vector<GeneratorData>& data,
                                   double scale, double const_tol = 1e-8);

} // namespace lightlike
