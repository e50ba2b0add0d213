#include "lightlike/cartan.hpp"

#include "lightlike/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lightlike {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double smallest_singular_ratio(const Mat& m) {
    Eigen::JacobiSVD<Mat> svd(m);
    const Vec& s = svd.singularValues();
    return s(0) > 0.0 ? s(s.size() - 1) / s(0) : 0.0;
}

double relative_asymmetry(const Mat& m) {
    return max_abs(m - m.transpose()) / std::max(1.0, max_abs(m));
}

bool margin_ok(const SurfaceChart& chart, const Vec& x, const Vec& dir, double reach) {
    const int d = chart.param_dim();
    for (double sgn : {-1.0, 1.0}) {
        const Vec u = (x + sgn * reach * dir).head(d);
        if (!chart.domain().interior(u, Vec::Zero(d))) return false;
    }
    return true;
}

} // namespace

double frame_rcond(const AdaptedFrame& f) {
    Eigen::PartialPivLU<Mat> lu(f.matrix());
    return lu.rcond();
}

std::vector<ConnectionSlice> connection_slices(const FrameSample& s) {
    const Mat F = s.frame.matrix();
    Eigen::PartialPivLU<Mat> lu(F);
    const double rc = lu.rcond();
    if (!(rc > 1e-13)) {
        std::ostringstream os;
        os << "frame matrix is singular (condition number ~" << 1.0 / rc << ")";
        throw Error(ErrorKind::degeneracy, os.str());
    }
    std::vector<ConnectionSlice> out;
    const Eigen::Index n = static_cast<Eigen::Index>(s.d.size());
    for (Eigen::Index k = 0; k < n; ++k) {
        ConnectionSlice c;
        c.omega = lu.solve(s.d[static_cast<std::size_t>(k)]).transpose();
        c.dg = s.dg[static_cast<std::size_t>(k)];
        c.v = Vec::Unit(n, k);
        out.push_back(std::move(c));
    }
    return out;
}

ConnectionSlice combine(const std::vector<ConnectionSlice>& axes, const Vec& v) {
    ConnectionSlice c;
    c.omega = Mat::Zero(axes.front().omega.rows(), axes.front().omega.cols());
    c.dg = Mat::Zero(axes.front().dg.rows(), axes.front().dg.cols());
    for (std::size_t k = 0; k < axes.size(); ++k) {
        const double vk = v(static_cast<Eigen::Index>(k));
        if (vk == 0.0) continue;
        c.omega += vk * axes[k].omega;
        c.dg += vk * axes[k].dg;
    }
    c.v = v;
    return c;
}

ConnectionSlice connection_matrix(const FrameField& field, const Vec& x, const Vec& v) {
    if (v.size() != field.n()) throw Error(ErrorKind::usage, "connection_matrix: direction has wrong dimension");
    return combine(connection_slices(field.sample(x)), v);
}

double ResidualReport::max() const {
    double m = 0.0;
    for (const auto& [label, value] : entries) m = std::max(m, value);
    return m;
}

double ResidualReport::at(const std::string& label) const {
    for (const auto& [l, value] : entries)
        if (l == label) return value;
    throw Error(ErrorKind::usage, "no residual labeled '" + label + "'");
}

std::vector<std::string> ResidualReport::above(double tol) const {
    std::vector<std::string> out;
    for (const auto& [label, value] : entries)
        if (!(value <= tol)) out.push_back(label);
    return out;
}

ResidualReport pfaffian_residuals(const ConnectionSlice& slice, const Mat& g) {
    const Mat& w = slice.omega;
    const Eigen::Index n = w.rows() - 2, d = n - 1, np = n + 1;
    double r1 = 0, r2 = 0, r3 = 0, r4 = 0, r5 = 0, r6 = 0, r7 = 0, r8 = 0, r9 = 0;
    r1 = std::abs(w(0, np));
    r2 = std::abs(w(np, 0));
    r3 = std::abs(w(0, 0) + w(np, np));
    for (Eigen::Index i = 0; i < d; ++i) {
        double a = w(1 + i, np), b = w(1 + i, 0), c = w(1 + i, n);
        for (Eigen::Index j = 0; j < d; ++j) {
            a -= g(i, j) * w(0, 1 + j);
            b -= g(i, j) * w(np, 1 + j);
            c += g(i, j) * w(n, 1 + j);
        }
        r4 = std::max(r4, std::abs(a));
        r5 = std::max(r5, std::abs(b));
        r8 = std::max(r8, std::abs(c));
    }
    r6 = std::abs(w(n, np) - w(0, n));
    r7 = std::abs(w(n, 0) - w(np, n));
    r9 = std::abs(w(n, n));
    double rg = 0.0;
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) {
            double v = slice.dg(i, j);
            for (Eigen::Index k = 0; k < d; ++k) v -= g(j, k) * w(1 + i, 1 + k) + g(i, k) * w(1 + j, 1 + k);
            rg = std::max(rg, std::abs(v));
        }
    ResidualReport rep;
    rep.entries = {
        {"omega_0^{n+1}", r1},
        {"omega_{n+1}^0", r2},
        {"omega_0^0 + omega_{n+1}^{n+1}", r3},
        {"omega_i^{n+1} - g_ij omega_0^j", r4},
        {"omega_i^0 - g_ij omega_{n+1}^j", r5},
        {"omega_n^{n+1} - omega_0^n", r6},
        {"omega_n^0 - omega_{n+1}^n", r7},
        {"g_ij omega_n^j + omega_i^n", r8},
        {"omega_n^n", r9},
        {"dg_ij - g_jk omega_i^k - g_ik omega_j^k", rg},
        {"omega_n^{n+1} (lightlike)", std::abs(w(n, np))},
        {"omega_0^n (tangency)", std::abs(w(0, n))},
    };
    return rep;
}

MetricPair metric_pair_from_slices(const std::vector<ConnectionSlice>& slices, const Mat& g, double gauge,
                                   const ExtractOptions& opts) {
    const Eigen::Index n = static_cast<Eigen::Index>(slices.size()), d = n - 1, np = n + 1;
    MetricPair mp;
    mp.g = g;
    mp.gauge_tag = gauge;
    mp.theta.resize(d, n);
    mp.omega_n.resize(d, n);
    mp.omega_n0.resize(1, n);
    mp.omega_00.resize(1, n);
    Mat Lraw(d, n), P(d, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Mat& w = slices[static_cast<std::size_t>(k)].omega;
        for (Eigen::Index i = 0; i < d; ++i) {
            mp.theta(i, k) = w(0, 1 + i);
            mp.omega_n(i, k) = w(n, 1 + i);
            Lraw(i, k) = w(1 + i, n);
            P(i, k) = w(1 + i, np);
        }
        mp.omega_n0(0, k) = w(n, 0);
        mp.omega_00(0, k) = w(0, 0);
    }
    // lambda from the u axes: Lraw = lambda theta
    const Mat theta_u = mp.theta.leftCols(d);
    if (smallest_singular_ratio(theta_u) < 1e-12)
        throw Error(ErrorKind::degeneracy, "the forms omega_0^i are dependent on the parameter axes");
    Mat lambda = theta_u.transpose().partialPivLu().solve(Lraw.leftCols(d).transpose()).transpose();
    mp.lambda_asymmetry = relative_asymmetry(lambda);
    if (mp.lambda_asymmetry > opts.symmetry_tol)
        throw Error(ErrorKind::degeneracy, "lambda asymmetry defect " + std::to_string(mp.lambda_asymmetry) +
                                               " exceeds tolerance");
    mp.lambda = 0.5 * (lambda + lambda.transpose());

    const Mat N = mp.omega_n.leftCols(d);
    if (smallest_singular_ratio(N) < opts.rcond_tol) {
        mp.nu_defined = false;
        mp.nu = Mat::Constant(d, d, kNaN);
        mp.nu_asymmetry = kNaN;
        mp.duality_residual = kNaN;
        mp.coframe_residual = kNaN;
        return mp;
    }
    Mat nu = N.transpose().partialPivLu().solve(P.leftCols(d).transpose()).transpose();
    mp.nu_asymmetry = relative_asymmetry(nu);
    if (mp.nu_asymmetry > opts.symmetry_tol)
        throw Error(ErrorKind::degeneracy, "nu asymmetry defect " + std::to_string(mp.nu_asymmetry) +
                                               " exceeds tolerance");
    mp.nu = 0.5 * (nu + nu.transpose());
    if (smallest_singular_ratio(mp.nu) < 1e-12)
        throw Error(ErrorKind::assumption, "maximal-rank assumption violated: rank(nu) < n-1");

    const Mat dual = -g * mp.lambda.partialPivLu().solve(g);
    mp.duality_residual = max_abs(mp.nu - dual) / std::max(1.0, max_abs(mp.nu));
    const Mat ginv = g.inverse();
    mp.coframe_residual = max_abs(mp.theta - ginv * mp.nu * mp.omega_n);
    return mp;
}

MetricPair extract_metric_pair(const FrameField& field, const Vec& x, const ExtractOptions& opts) {
    const FrameSample s = field.sample(x);
    return metric_pair_from_slices(connection_slices(s), s.g, x(x.size() - 1), opts);
}

FundamentalForms fundamental_forms(const MetricPair& mp) {
    if (!mp.nu_defined) throw Error(ErrorKind::geometry, "second fundamental form undefined at a focus");
    FundamentalForms f;
    f.first = mp.omega_n.transpose() * mp.g * mp.omega_n;
    f.second = mp.omega_n.transpose() * mp.nu * mp.omega_n;
    return f;
}

Vec generator_direction(const MetricPair& mp) {
    Eigen::FullPivLU<Mat> lu(mp.omega_n);
    const Mat k = lu.kernel();
    Vec v = k.col(0);
    return v / v.norm();
}

Mat plaquette_differential(const FrameField& field, const Vec& x, const Vec& v, const Vec& w, double h,
                           bool extrapolate) {
    if (v.size() != field.n() || w.size() != field.n())
        throw Error(ErrorKind::usage, "plaquette: directions have wrong dimension");
    if (!margin_ok(field.chart(), x, v, 2.0 * h) || !margin_ok(field.chart(), x, w, 2.0 * h))
        throw Error(ErrorKind::domain, "plaquette leaves the chart domain");

    auto slice_at = [&](const Vec& p, const Vec& dir) { return combine(connection_slices(field.sample(p)), dir).omega; };
    auto boundary_sum = [&](double s) {
        return Mat((slice_at(x + 0.5 * s * v, w) - slice_at(x - 0.5 * s * v, w) - slice_at(x + 0.5 * s * w, v) +
                    slice_at(x - 0.5 * s * w, v)) /
                   s);
    };
    Mat dw = boundary_sum(h);
    if (extrapolate) dw = (4.0 * boundary_sum(0.5 * h) - dw) / 3.0;
    return dw;
}

PlaquetteReport plaquette_check(const FrameField& field, const Vec& x, const Vec& v, const Vec& w, double h,
                                bool extrapolate) {
    const Mat dw = plaquette_differential(field, x, v, w, h, extrapolate);
    const auto center = connection_slices(field.sample(x));
    const Mat Ov = combine(center, v).omega, Ow = combine(center, w).omega;

    PlaquetteReport rep;
    rep.structure = max_abs(dw - (Ov * Ow - Ow * Ov));

    const Eigen::Index n = Ov.rows() - 2, d = n - 1, np = n + 1;
    const Mat g = field.metric(x);
    auto W = [&](Eigen::Index a, Eigen::Index b, Eigen::Index c, Eigen::Index e) {
        return wedge(Ov(a, b), Ow(a, b), Ov(c, e), Ow(c, e));
    };
    double c00 = dw(0, 0), c0i = 0.0, ci0 = 0.0, cji = 0.0;
    for (Eigen::Index i = 1; i <= d; ++i) c00 -= W(0, i, i, 0);
    for (Eigen::Index i = 1; i <= d; ++i) {
        double a = dw(0, i) - W(0, 0, 0, i);
        double b = dw(i, 0) - W(i, 0, 0, 0);
        for (Eigen::Index j = 1; j <= d; ++j) {
            a -= W(0, j, j, i);
            b -= W(i, j, j, 0);
            b += g(i - 1, j - 1) * W(n, j, n, 0);
        }
        c0i = std::max(c0i, std::abs(a));
        ci0 = std::max(ci0, std::abs(b));
        for (Eigen::Index j = 1; j <= d; ++j) {
            double c = dw(j, i) - W(j, 0, 0, i) - W(j, np, np, i);
            for (Eigen::Index k = 1; k <= d; ++k) {
                c -= W(j, k, k, i);
                c += g(j - 1, k - 1) * W(n, k, n, i);
            }
            cji = std::max(cji, std::abs(c));
        }
    }
    rep.curvature.entries = {
        {"Omega_0^0", std::abs(c00)},
        {"Omega_0^i", c0i},
        {"Omega_i^0", ci0},
        {"Omega_j^i", cji},
    };
    return rep;
}

} // namespace lightlike
