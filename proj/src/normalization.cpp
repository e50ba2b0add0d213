#include "lightlike/normalization.hpp"

#include "lightlike/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace lightlike {

namespace {

std::string format_u(const Vec& u) {
    std::ostringstream os;
    os.precision(6);
    os << "u = (";
    for (Eigen::Index i = 0; i < u.size(); ++i) os << (i ? ", " : "") << u(i);
    os << ")";
    return os.str();
}

double smallest_singular_value(const Mat& m) {
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

// Lambda in the gauge of x and its derivative along axis k from third-order jets.
Mat jet_lambda_derivative(const Jet& j, double t, int k) {
    const int d = j.param_dim();
    const Vec m = j.m(), mk = j.dm(k);
    Mat out(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            const double dl = j.d3r(a, b, k).dot(m) + j.d2r(a, b).dot(mk);
            const double dg = j.d2r(a, k).dot(j.dr(b)) + j.dr(a).dot(j.d2r(b, k));
            out(a, b) = dl - t * dg;
        }
    return out;
}

double step_along(const FrameField& field, int k, double h_rel) {
    const auto& c = field.chart();
    if (k < c.param_dim()) return h_rel * c.domain().extent(k);
    return h_rel;
}

} // namespace

double mean_root(const MetricPair& mp, double* vieta_defect) {
    const Eigen::Index d = mp.g.rows();
    if (d < 2) throw Error(ErrorKind::input, "mean root needs n >= 3");
    const double lb = (mp.g.ldlt().solve(mp.lambda)).trace() / static_cast<double>(d);
    if (vieta_defect) {
        const PencilSpectrum ps = solve_symmetric_pencil(mp.lambda, mp.g, 1e-6);
        *vieta_defect = std::abs(lb - ps.roots.mean());
    }
    return lb;
}

TraceFree trace_free_tensor(const MetricPair& mp, double lambda_bar) {
    TraceFree tf;
    tf.a = mp.lambda - lambda_bar * mp.g;
    tf.a = 0.5 * (tf.a + tf.a.transpose());
    tf.a_mixed = mp.g.ldlt().solve(tf.a);
    tf.apolarity = std::abs(tf.a_mixed.trace());
    return tf;
}

Vec harmonic_pole(const AdaptedFrame& frame, double lambda_bar) {
    return frame.hypersphere() + lambda_bar * frame.origin();
}

double cross_ratio(const Vec& p1, const Vec& p2, const Vec& p3, const Vec& p4) {
    Mat P(p1.size(), 4);
    P << p1, p2, p3, p4;
    Eigen::JacobiSVD<Mat> svd(P, Eigen::ComputeThinU);
    const Vec& s = svd.singularValues();
    if (s(0) == 0.0 || s(1) < 1e-12 * s(0))
        throw Error(ErrorKind::input, "cross ratio: points do not span a line");
    if (s.size() > 2 && s(2) > 1e-8 * s(0))
        throw Error(ErrorKind::input, "cross ratio: points are not collinear");
    const Mat c = svd.matrixU().leftCols(2).transpose() * P;
    auto br = [&](int i, int j) { return c(0, i) * c(1, j) - c(1, i) * c(0, j); };
    const double den = br(1, 2) * br(0, 3);
    if (den == 0.0) throw Error(ErrorKind::input, "cross ratio: coincident points");
    return br(0, 2) * br(1, 3) / den;
}

ThirdOrder third_order(const FrameField& field, const Vec& x, const ThirdOrderOptions& opts) {
    const int n = field.n(), d = n - 1;
    const FrameSample s = field.sample(x);
    const auto slices = connection_slices(s);
    const MetricPair mp = metric_pair_from_slices(slices, s.g, x(d));
    const Mat ginv = mp.g.inverse();
    const double lb = (ginv * mp.lambda).trace() / d;

    // dlambda[k] and d(mean root)[k] along every axis of x.
    std::vector<Mat> dlam(static_cast<std::size_t>(n));
    std::vector<double> dlb(static_cast<std::size_t>(n));
    if (opts.route == ThirdOrderRoute::jets) {
        const auto* cf = dynamic_cast<const ChartFrameField*>(&field);
        if (!cf) throw Error(ErrorKind::config, "third-order jets route needs a chart frame field");
        const Jet j = compute_jet(cf->chart(), x.head(d), 3, cf->options().jets);
        for (int k = 0; k < d; ++k) {
            dlam[k] = jet_lambda_derivative(j, x(d), k);
            const Mat& dg = slices[k].dg;
            dlb[k] = ((ginv * dlam[k]).trace() - (ginv * dg * ginv * mp.lambda).trace()) / d;
        }
        dlam[d] = -mp.g;
        dlb[d] = -1.0;
    } else {
        for (int k = 0; k < n; ++k) {
            const double h = step_along(field, k, opts.h_rel);
            Vec xp = x, xm = x;
            xp(k) += h;
            xm(k) -= h;
            const MetricPair p = extract_metric_pair(field, xp), m = extract_metric_pair(field, xm);
            dlam[k] = (p.lambda - m.lambda) / (2.0 * h);
            dlb[k] = (mean_root(p) - mean_root(m)) / (2.0 * h);
        }
    }

    // L_k(i, j) = nabla lambda_ij + lambda_ij omega_0^0 + g_ij omega_n^0 along axis k.
    const Mat theta_u = mp.theta.leftCols(d);
    const Mat theta_inv = theta_u.inverse();
    std::vector<Mat> L(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const Mat& W = slices[k].omega;
        const Mat wij = W.block(1, 1, d, d);  // omega_i^l
        L[k] = dlam[k] - mp.lambda * wij.transpose() - wij * mp.lambda + mp.lambda * W(0, 0) + mp.g * W(n, 0);
    }

    ThirdOrder out;
    out.lambda_ijk.assign(static_cast<std::size_t>(d), Mat::Zero(d, d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Vec row(d);
            for (int k = 0; k < d; ++k) row(k) = L[k](i, j);
            const Vec c = theta_inv.transpose() * row;
            for (int l = 0; l < d; ++l) out.lambda_ijk[l](i, j) = c(l);
        }

    auto T = [&](int i, int j, int k) { return out.lambda_ijk[k](i, j); };
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) {
                const double sym = (T(i, j, k) + T(i, k, j) + T(j, i, k) + T(j, k, i) + T(k, i, j) + T(k, j, i)) / 6.0;
                out.symmetry_defect = std::max(out.symmetry_defect, std::abs(T(i, j, k) - sym));
            }

    out.lambda_k = Vec::Zero(d);
    for (int k = 0; k < d; ++k) out.lambda_k(k) = (ginv.cwiseProduct(out.lambda_ijk[k])).sum() / d;

    for (int k = 0; k < n; ++k) {
        const Mat& W = slices[k].omega;
        double r = dlb[k] + lb * W(0, 0) + W(n, 0);
        for (int l = 0; l < d; ++l) r -= out.lambda_k(l) * mp.theta(l, k);
        out.mean_residual = std::max(out.mean_residual, std::abs(r));
    }
    return out;
}

NormalizationPoints normalization_points(const AdaptedFrame& frame, const Vec& C, const Mat& a_mixed,
                                         const Vec& lambda_k, double scale, double degenerate_tol) {
    const int d = frame.n() - 1;
    if (smallest_singular_value(a_mixed) < degenerate_tol * std::max(scale, 1e-300))
        throw Error(ErrorKind::geometry, "normalization undefined: trace-free part of lambda is degenerate");
    NormalizationPoints p;
    p.zeta.resize(C.size(), d);
    p.tangent_W.resize(C.size(), d + 1);
    p.tangent_W.col(0) = C;
    for (int i = 0; i < d; ++i) {
        Vec ci = lambda_k(i) * frame.origin();
        for (int j = 0; j < d; ++j) ci -= a_mixed(j, i) * frame.A[static_cast<std::size_t>(j + 1)];
        p.Ci.push_back(ci);
        p.zeta.col(i) = ci;
        p.tangent_W.col(i + 1) = ci;
    }
    p.screen_det = (-a_mixed).determinant();
    return p;
}

Vec screen_shift(const Mat& a_mixed, const Vec& lambda_k) {
    // A_l - tau_l A_0 = sum_i c_i C_i with -a_mixed c = e_l.
    return a_mixed.transpose().partialPivLu().solve(lambda_k);
}

double principal_angle(const Mat& a, const Mat& b) {
    const Mat qa = Eigen::HouseholderQR<Mat>(a).householderQ() * Mat::Identity(a.rows(), a.cols());
    const Mat qb = Eigen::HouseholderQR<Mat>(b).householderQ() * Mat::Identity(b.rows(), b.cols());
    Eigen::JacobiSVD<Mat> svd(qa.transpose() * qb);
    const Vec& s = svd.singularValues();
    const double c = std::clamp(s(s.size() - 1), 0.0, 1.0);
    return std::acos(c);
}

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::integrable: return "integrable";
    case Verdict::non_integrable: return "non-integrable";
    case Verdict::indeterminate: return "indeterminate";
    }
    return "?";
}

Verdict verdict_for(double value, double tol) {
    if (value < tol) return Verdict::integrable;
    if (value > 10.0 * tol) return Verdict::non_integrable;
    return Verdict::indeterminate;
}

ScreenResult screen_mu(const FrameField& screen, const Vec& x, const ScreenOptions& opts) {
    const int n = screen.n(), d = n - 1;
    const auto slices = connection_slices(screen.sample(x));

    // Coframe (omega_n^j, omega_n^0) on the axes of x, and the omega_i^0.
    Mat K(n, n), Y(n, d);
    for (int k = 0; k < n; ++k) {
        const Mat& W = slices[static_cast<std::size_t>(k)].omega;
        for (int j = 0; j < d; ++j) K(k, j) = W(n, 1 + j);
        K(k, d) = W(n, 0);
        for (int i = 0; i < d; ++i) Y(k, i) = W(1 + i, 0);
    }
    Eigen::FullPivLU<Mat> lu(K);
    if (!lu.isInvertible()) throw Error(ErrorKind::assumption, "screen coframe is singular at this point");
    const Mat sol = lu.solve(Y);

    ScreenResult r;
    r.mu = sol.topRows(d).transpose();
    r.mu_vec = sol.row(d).transpose();
    r.asymmetry = max_abs(r.mu - r.mu.transpose());
    r.tolerance = opts.rel_tol * std::max(1.0, std::max(max_abs(r.mu), r.mu_vec.cwiseAbs().maxCoeff()));

    // Dual frame: E = K^{-1}; column j is e_j for omega_n^j, column d is e_0.
    // omega_n^0 vanishes on e_j and is 1 on e_0, so the 3-form on (e_0, e_i, e_j)
    // reduces to d omega_n^0(e_i, e_j).
    const Mat E = lu.inverse().transpose();
    const double extent = screen.chart().domain().max_extent();
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            const Vec ei = E.col(i), ej = E.col(j);
            const double reach = std::max(ei.cwiseAbs().maxCoeff(), ej.cwiseAbs().maxCoeff());
            const double h = opts.plaquette_h * extent / reach;
            const Mat dw = plaquette_differential(screen, x, ei, ej, h, opts.extrapolate);
            r.frobenius = std::max(r.frobenius, std::abs(dw(n, 0)));
        }
    r.verdict = verdict_for(r.asymmetry, r.tolerance);
    r.frobenius_verdict = verdict_for(r.frobenius, r.tolerance);
    r.agree = r.verdict == r.frobenius_verdict;
    return r;
}

NormalizationData normalize_generator(const FrameField& field, const Vec& x, double scale,
                                      const ThirdOrderOptions& opts) {
    const int d = field.n() - 1;
    NormalizationData nd;
    const MetricPair mp = extract_metric_pair(field, x);
    nd.lambda_bar = mean_root(mp, &nd.vieta_defect);
    nd.tf = trace_free_tensor(mp, nd.lambda_bar);
    const AdaptedFrame frame = field.frame(x);
    nd.C = harmonic_pole(frame, nd.lambda_bar);
    nd.third = third_order(field, x, opts);
    try {
        nd.points = normalization_points(frame, nd.C, nd.tf.a_mixed, nd.third.lambda_k, scale);
        nd.tau = screen_shift(nd.tf.a_mixed, nd.third.lambda_k);
        nd.defined = true;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::geometry) throw;
        nd.undefined_reason = "normalization undefined at " + format_u(x.head(d));
    }
    return nd;
}

} // namespace lightlike
