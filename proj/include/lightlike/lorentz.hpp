#pragma once

// Lorentzian linear algebra on R^{n+2}_1.
//
// The computational basis is the isotropic-pair basis (e_0, e_1..e_n, e_{n+1}):
// e_0 and e_{n+1} are null with (e_0, e_{n+1}) = -1 and e_1..e_n are an
// orthonormal Euclidean block. A point x of the absolute quadric satisfies
// (x, x) = 0; points of de Sitter space satisfy (x, x) > 0.

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace lightlike {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Symmetric bilinear form on R^{n+2} of signature (n+1, 1).
class GramMatrix {
public:
    /// Validates symmetry and Lorentzian signature; throws Error(input) otherwise.
    explicit GramMatrix(Mat entries);

    /// The isotropic-pair form for hypersurfaces of R^n.
    static GramMatrix isotropic_pair(int n);

    const Mat& entries() const noexcept { return entries_; }
    Eigen::Index dim() const noexcept { return entries_.rows(); }

private:
    Mat entries_;
};

/// u^T G v. Throws Error(usage) on dimension mismatch.
double inner_product(const Vec& u, const Vec& v, const GramMatrix& G);

enum class CausalCharacter { spacelike, timelike, lightlike };
const char* to_string(CausalCharacter c);

/// Causal type of span(basis). Vectors are rescaled to unit Euclidean length
/// before the restricted form is examined; eigenvalues of the restricted form
/// within tol of zero count as kernel. Throws Error(degeneracy) if the basis
/// itself is linearly dependent.
CausalCharacter causal_character(std::span<const Vec> basis, const GramMatrix& G,
                                 double tol = 1e-9);

/// Restricted Gram matrix of span(basis) after unit rescaling, exposed for reporting.
Mat restricted_form(std::span<const Vec> basis, const GramMatrix& G);

/// Solution of det(L - s g) = 0 for symmetric L and SPD g.
struct PencilSpectrum {
    Vec roots;    // ascending
    Mat eigvecs;  // columns g-orthonormal, L eigvecs = g eigvecs diag(roots)
};

/// Reduces the pencil through the Cholesky factor of g to a standard symmetric
/// eigenproblem. Eigenvectors are sign-fixed so their largest-magnitude
/// component is positive.
PencilSpectrum solve_symmetric_pencil(const Mat& L, const Mat& g, double sym_tol = 1e-9);

/// Gram matrix of a list of vectors under G.
Mat gram_of(std::span<const Vec> vectors, const GramMatrix& G);

/// Gram matrix of vectors minus target, elementwise.
Mat validate_gram(std::span<const Vec> vectors, const GramMatrix& G, const Mat& target);

/// Coefficient vector G x of the polar hyperplane of x with respect to the quadric.
Vec polar_hyperplane(const Vec& x, const GramMatrix& G);

/// Max-abs entry, 0 for empty matrices.
double max_abs(const Mat& m);

} // namespace lightlike
