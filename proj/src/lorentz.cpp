#include "lightlike/lorentz.hpp"

#include "lightlike/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lightlike {

namespace {

bool symmetric_within(const Mat& m, double rel_tol) {
    const double scale = std::max(1.0, max_abs(m));
    return max_abs(m - m.transpose()) <= rel_tol * scale;
}

// Cholesky factor with the index of the first non-positive leading minor.
// Returns -1 on success.
int cholesky_lower(const Mat& g, Mat& L) {
    const Eigen::Index k = g.rows();
    L = Mat::Zero(k, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        double d = g(j, j);
        for (Eigen::Index p = 0; p < j; ++p) d -= L(j, p) * L(j, p);
        if (!(d > 0.0) || !std::isfinite(d)) return static_cast<int>(j);
        L(j, j) = std::sqrt(d);
        for (Eigen::Index i = j + 1; i < k; ++i) {
            double s = g(i, j);
            for (Eigen::Index p = 0; p < j; ++p) s -= L(i, p) * L(j, p);
            L(i, j) = s / L(j, j);
        }
    }
    return -1;
}

} // namespace

double max_abs(const Mat& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

GramMatrix::GramMatrix(Mat entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() < 2)
        throw Error(ErrorKind::usage, "Gram matrix must be square of size >= 2");
    if (!entries_.allFinite()) throw Error(ErrorKind::input, "Gram matrix has non-finite entries");
    if (!symmetric_within(entries_, 1e-12))
        throw Error(ErrorKind::input, "Gram matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Mat> es(entries_);
    const Vec& ev = es.eigenvalues();
    const double tol = 1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff());
    int neg = 0, pos = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < -tol) ++neg;
        else if (ev(i) > tol) ++pos;
    }
    if (neg != 1 || pos != ev.size() - 1)
        throw Error(ErrorKind::input, "Gram matrix does not have Lorentzian signature");
}

GramMatrix GramMatrix::isotropic_pair(int n) {
    if (n < 2) throw Error(ErrorKind::usage, "isotropic_pair: n must be >= 2");
    Mat G = Mat::Zero(n + 2, n + 2);
    for (int k = 1; k <= n; ++k) G(k, k) = 1.0;
    G(0, n + 1) = -1.0;
    G(n + 1, 0) = -1.0;
    return GramMatrix(std::move(G));
}

double inner_product(const Vec& u, const Vec& v, const GramMatrix& G) {
    if (u.size() != G.dim() || v.size() != G.dim())
        throw Error(ErrorKind::usage, "inner_product: dimension mismatch");
    // Accumulate symmetric pairs so that swapping u and v is bit-identical.
    const Mat& g = G.entries();
    double acc = 0.0;
    const Eigen::Index d = g.rows();
    for (Eigen::Index i = 0; i < d; ++i) {
        acc += g(i, i) * (u(i) * v(i));
        for (Eigen::Index j = i + 1; j < d; ++j) acc += g(i, j) * (u(i) * v(j) + u(j) * v(i));
    }
    return acc;
}

const char* to_string(CausalCharacter c) {
    switch (c) {
    case CausalCharacter::spacelike: return "spacelike";
    case CausalCharacter::timelike: return "timelike";
    case CausalCharacter::lightlike: return "lightlike";
    }
    return "unknown";
}

Mat restricted_form(std::span<const Vec> basis, const GramMatrix& G) {
    std::vector<Vec> unit;
    unit.reserve(basis.size());
    for (const Vec& b : basis) {
        if (b.size() != G.dim()) throw Error(ErrorKind::usage, "causal_character: dimension mismatch");
        const double nb = b.norm();
        if (!(nb > 0.0)) throw Error(ErrorKind::degeneracy, "causal_character: zero basis vector");
        unit.push_back(b / nb);
    }
    return gram_of(unit, G);
}

CausalCharacter causal_character(std::span<const Vec> basis, const GramMatrix& G, double tol) {
    if (basis.empty()) throw Error(ErrorKind::usage, "causal_character: empty basis");
    Mat B(G.dim(), static_cast<Eigen::Index>(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k) {
        if (basis[k].size() != G.dim()) throw Error(ErrorKind::usage, "causal_character: dimension mismatch");
        const double nb = basis[k].norm();
        if (!(nb > 0.0)) throw Error(ErrorKind::degeneracy, "causal_character: zero basis vector");
        B.col(static_cast<Eigen::Index>(k)) = basis[k] / nb;
    }
    Eigen::JacobiSVD<Mat> svd(B);
    const Vec& sv = svd.singularValues();
    if (sv(sv.size() - 1) < 1e-10 * sv(0))
        throw Error(ErrorKind::degeneracy, "causal_character: basis vectors are linearly dependent");

    const Mat form = restricted_form(basis, G);
    Eigen::SelfAdjointEigenSolver<Mat> es(form);
    const Vec& ev = es.eigenvalues();
    if (ev(0) < -tol) return CausalCharacter::timelike;
    if (ev(0) <= tol) return CausalCharacter::lightlike;
    return CausalCharacter::spacelike;
}

PencilSpectrum solve_symmetric_pencil(const Mat& L, const Mat& g, double sym_tol) {
    if (L.rows() != L.cols() || g.rows() != g.cols() || L.rows() != g.rows() || L.rows() == 0)
        throw Error(ErrorKind::usage, "solve_symmetric_pencil: shape mismatch");
    if (!L.allFinite() || !g.allFinite())
        throw Error(ErrorKind::input, "solve_symmetric_pencil: non-finite entries");
    if (!symmetric_within(L, sym_tol))
        throw Error(ErrorKind::input, "solve_symmetric_pencil: L is not symmetric within tolerance");
    if (!symmetric_within(g, sym_tol))
        throw Error(ErrorKind::input, "solve_symmetric_pencil: g is not symmetric within tolerance");

    const Mat gs = 0.5 * (g + g.transpose());
    Mat chol;
    const int bad = cholesky_lower(gs, chol);
    if (bad >= 0) {
        std::ostringstream os;
        os << "solve_symmetric_pencil: g is not positive definite (leading minor of order "
           << bad + 1 << " is not positive)";
        throw Error(ErrorKind::input, os.str());
    }

    // C = chol^{-1} L chol^{-T}
    const Mat Ls = 0.5 * (L + L.transpose());
    const auto tri = chol.triangularView<Eigen::Lower>();
    Mat tmp = tri.solve(Ls);
    Mat C = tri.solve(tmp.transpose()).transpose();
    C = 0.5 * (C + C.transpose());

    Eigen::SelfAdjointEigenSolver<Mat> es(C);
    if (es.info() != Eigen::Success)
        throw Error(ErrorKind::degeneracy, "solve_symmetric_pencil: eigensolver did not converge");

    PencilSpectrum out;
    out.roots = es.eigenvalues();
    out.eigvecs = chol.transpose().triangularView<Eigen::Upper>().solve(es.eigenvectors());
    for (Eigen::Index c = 0; c < out.eigvecs.cols(); ++c) {
        Eigen::Index imax = 0;
        out.eigvecs.col(c).cwiseAbs().maxCoeff(&imax);
        if (out.eigvecs(imax, c) < 0.0) out.eigvecs.col(c) *= -1.0;
    }
    return out;
}

Mat gram_of(std::span<const Vec> vectors, const GramMatrix& G) {
    const auto k = static_cast<Eigen::Index>(vectors.size());
    Mat out(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = i; j < k; ++j) {
            const double v = inner_product(vectors[static_cast<std::size_t>(i)],
                                           vectors[static_cast<std::size_t>(j)], G);
            out(i, j) = v;
            out(j, i) = v;
        }
    return out;
}

Mat validate_gram(std::span<const Vec> vectors, const GramMatrix& G, const Mat& target) {
    const Mat actual = gram_of(vectors, G);
    if (actual.rows() != target.rows() || actual.cols() != target.cols())
        throw Error(ErrorKind::usage, "validate_gram: target has wrong shape");
    return actual - target;
}

Vec polar_hyperplane(const Vec& x, const GramMatrix& G) {
    if (x.size() != G.dim()) throw Error(ErrorKind::usage, "polar_hyperplane: dimension mismatch");
    if (!(x.cwiseAbs().maxCoeff() > 0.0)) throw Error(ErrorKind::usage, "polar_hyperplane: zero vector");
    return G.entries() * x;
}

} // namespace lightlike
