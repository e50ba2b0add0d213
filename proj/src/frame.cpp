#include "lightlike/frame.hpp"

#include "lightlike/error.hpp"

#include <cmath>
#include <sstream>

namespace lightlike {

namespace {

// Lift of a tangent-space vector w at r: w + (r.w) e_{n+1}.
Vec lift_vector(const Vec& w, const Vec& r) {
    const Eigen::Index n = w.size();
    Vec a = Vec::Zero(n + 2);
    a.segment(1, n) = w;
    a(n + 1) = r.dot(w);
    return a;
}

Vec solve_against_frame(const Mat& F, const GramMatrix& G, const Vec& rhs) {
    // (y, A_eta) = rhs_eta for all eta
    const Mat M = F.transpose() * G.entries();
    Eigen::PartialPivLU<Mat> lu(M);
    return lu.solve(rhs);
}

Mat pack(const std::vector<Vec>& cols) {
    Mat m(cols.front().size(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) m.col(static_cast<Eigen::Index>(c)) = cols[c];
    return m;
}

} // namespace

Mat AdaptedFrame::matrix() const { return pack(A); }

Mat AdaptedFrame::metric(const GramMatrix& G) const {
    const int k = n() - 1;
    Mat g(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            g(i, j) = inner_product(A[static_cast<std::size_t>(i + 1)], A[static_cast<std::size_t>(j + 1)], G);
    return g;
}

Mat frame_pattern(const Mat& g) {
    const Eigen::Index k = g.rows();
    Mat P = Mat::Zero(k + 3, k + 3);
    P.block(1, 1, k, k) = g;
    P(k + 1, k + 1) = 1.0;
    P(0, k + 2) = P(k + 2, 0) = -1.0;
    return P;
}

PartialFrame lift_point(const Jet& j) {
    const Vec r = j.r();
    const Eigen::Index n = r.size();
    PartialFrame p;
    p.A0 = Vec::Zero(n + 2);
    p.A0(0) = 1.0;
    p.A0.segment(1, n) = r;
    p.A0(n + 1) = 0.5 * r.squaredNorm();
    for (int i = 0; i < j.param_dim(); ++i) p.Ai.push_back(lift_vector(j.dr(i), r));
    p.An = lift_vector(j.m(), r);
    return p;
}

AdaptedFrame complete_frame(const PartialFrame& p, const GramMatrix& G) {
    const Eigen::Index dim = p.A0.size();
    const Eigen::Index rows = static_cast<Eigen::Index>(p.Ai.size()) + 2;
    Mat M(rows, dim);
    Vec b = Vec::Zero(rows);
    for (std::size_t i = 0; i < p.Ai.size(); ++i) M.row(static_cast<Eigen::Index>(i)) = (G.entries() * p.Ai[i]).transpose();
    M.row(rows - 2) = (G.entries() * p.An).transpose();
    M.row(rows - 1) = (G.entries() * p.A0).transpose();
    b(rows - 1) = -1.0;

    Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vec& sv = svd.singularValues();
    if (!(sv(sv.size() - 1) > 1e-12 * sv(0))) {
        std::ostringstream os;
        os << "frame completion is singular (condition number " << sv(0) / sv(sv.size() - 1) << ")";
        throw Error(ErrorKind::degeneracy, os.str());
    }
    // particular solution plus the multiple of A_0 (the kernel) making it null
    const Vec y = svd.solve(b);
    const double t = 0.5 * inner_product(y, y, G);
    AdaptedFrame f;
    f.A.push_back(p.A0);
    for (const auto& a : p.Ai) f.A.push_back(a);
    f.A.push_back(p.An);
    f.A.push_back(y + t * p.A0);
    return f;
}

AdaptedFrame gauge_shift(const AdaptedFrame& f, double s) {
    AdaptedFrame out = f;
    const std::size_t n = f.A.size() - 2;
    out.A[n] = f.A[n] + s * f.A[0];
    out.A[n + 1] = f.A[n + 1] + s * f.A[n] + (0.5 * s * s) * f.A[0];
    return out;
}

Vec hypersurface_point(const Vec& u, double t) {
    Vec x(u.size() + 1);
    x.head(u.size()) = u;
    x(u.size()) = t;
    return x;
}

Mat FrameField::metric(const Vec& x) const { return frame(x).metric(gram()); }

FrameSample FrameField::sample(const Vec& x) const {
    FrameSample s;
    s.frame = frame(x);
    s.g = s.frame.metric(gram());
    for (int k = 0; k < n(); ++k) {
        auto central = [&](double h, Mat& dg) {
            Vec xp = x, xm = x;
            xp(k) += h;
            xm(k) -= h;
            const AdaptedFrame fp = frame(xp), fm = frame(xm);
            dg = (fp.metric(gram()) - fm.metric(gram())) / (2.0 * h);
            return Mat((fp.matrix() - fm.matrix()) / (2.0 * h));
        };
        const double h = fd_step(k);
        Mat dg1;
        Mat d1 = central(h, dg1);
        if (fd_richardson()) {
            Mat dg2;
            const Mat d2 = central(0.5 * h, dg2);
            d1 = (4.0 * d2 - d1) / 3.0;
            dg1 = (4.0 * dg2 - dg1) / 3.0;
        }
        s.d.push_back(std::move(d1));
        s.dg.push_back(std::move(dg1));
    }
    return s;
}

ChartFrameField::ChartFrameField(const SurfaceChart& chart, FrameFieldOptions opts)
    : FrameField(chart.ambient_dim()), chart_(chart), opts_(std::move(opts)) {}

double ChartFrameField::fd_step(int k) const {
    const double extent = k < chart_.param_dim() ? chart_.domain().extent(k) : opts_.gauge_extent;
    return opts_.h_rel * extent;
}

AdaptedFrame ChartFrameField::frame(const Vec& x) const {
    if (x.size() != n()) throw Error(ErrorKind::usage, "frame: point must have n coordinates (u, t)");
    const Jet j = compute_jet(chart_, x.head(n() - 1), 1, opts_.jets);
    return gauge_shift(complete_frame(lift_point(j), gram()), x(n() - 1));
}

FrameSample ChartFrameField::sample(const Vec& x) const {
    if (opts_.derivatives == FrameDerivatives::finite_difference) return FrameField::sample(x);
    if (x.size() != n()) throw Error(ErrorKind::usage, "frame: point must have n coordinates (u, t)");

    const int d = n() - 1;
    const double t = x(d);
    const Jet j = compute_jet(chart_, x.head(d), 2, opts_.jets);
    const AdaptedFrame base = complete_frame(lift_point(j), gram());
    const Mat F = base.matrix();
    const Vec r = j.r();
    const std::size_t nn = static_cast<std::size_t>(n());

    FrameSample s;
    s.frame = gauge_shift(base, t);
    s.g = j.first_form();
    for (int k = 0; k < d; ++k) {
        std::vector<Vec> dA(nn + 2);
        dA[0] = base.A[static_cast<std::size_t>(k + 1)];
        for (int i = 0; i < d; ++i) {
            const Vec rik = j.d2r(i, k);
            Vec a = lift_vector(rik, r);
            a(n() + 1) += j.dr(i).dot(j.dr(k));
            dA[static_cast<std::size_t>(i + 1)] = a;
        }
        Vec an = lift_vector(j.dm(k), r);
        an(n() + 1) += j.dr(k).dot(j.m());
        dA[nn] = an;
        // (dA_{n+1}, A_eta) = -(A_{n+1}, dA_eta); (dA_{n+1}, A_{n+1}) = 0
        Vec rhs(static_cast<Eigen::Index>(nn + 2));
        for (std::size_t e = 0; e <= nn; ++e)
            rhs(static_cast<Eigen::Index>(e)) = -inner_product(base.A[nn + 1], dA[e], gram());
        rhs(static_cast<Eigen::Index>(nn + 1)) = 0.0;
        dA[nn + 1] = solve_against_frame(F, gram(), rhs);

        // gauge t: dA_n += t dA_0, dA_{n+1} += t dA_n + t^2/2 dA_0
        dA[nn + 1] = dA[nn + 1] + t * dA[nn] + (0.5 * t * t) * dA[0];
        dA[nn] = dA[nn] + t * dA[0];
        s.d.push_back(pack(dA));

        Mat dg(d, d);
        for (int i = 0; i < d; ++i)
            for (int l = 0; l < d; ++l) dg(i, l) = j.d2r(i, k).dot(j.dr(l)) + j.dr(i).dot(j.d2r(l, k));
        s.dg.push_back(dg);
    }
    // along the generator: dA_0 = dA_i = 0, dA_n = A_0, dA_{n+1} = A_n (shifted)
    std::vector<Vec> dT(nn + 2, Vec::Zero(n() + 2));
    dT[nn] = base.A[0];
    dT[nn + 1] = s.frame.A[nn];
    s.d.push_back(pack(dT));
    s.dg.push_back(Mat::Zero(d, d));
    return s;
}

ScreenFrameField::ScreenFrameField(const ChartFrameField& base, Shift tau, double h_rel, bool richardson)
    : FrameField(base.n()), base_(base), tau_(std::move(tau)), h_rel_(h_rel), richardson_(richardson) {}

double ScreenFrameField::fd_step(int k) const {
    const auto& c = base_.chart();
    const double extent = k < c.param_dim() ? c.domain().extent(k) : base_.options().gauge_extent;
    return h_rel_ * extent;
}

AdaptedFrame ScreenFrameField::frame(const Vec& x) const {
    const AdaptedFrame f = base_.frame(x);
    const int d = n() - 1;
    const Vec tau = tau_(x.head(d));
    if (tau.size() != d) throw Error(ErrorKind::usage, "screen shift must have n-1 components");
    PartialFrame p;
    p.A0 = f.A[0];
    for (int i = 0; i < d; ++i) p.Ai.push_back(f.A[static_cast<std::size_t>(i + 1)] - tau(i) * f.A[0]);
    p.An = f.A[static_cast<std::size_t>(n())];
    return complete_frame(p, gram());
}

} // namespace lightlike
