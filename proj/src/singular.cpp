#include "lightlike/singular.hpp"

#include "lightlike/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace lightlike {

namespace {

double chart_scale(const FrameField& field, const SingularOptions& opts) {
    return opts.scale > 0.0 ? opts.scale : field.chart().curvature_scale();
}

std::string where(const Vec& x) {
    std::ostringstream os;
    os.precision(10);
    os << "(";
    for (Eigen::Index k = 0; k < x.size(); ++k) os << (k ? ", " : "") << x(k);
    os << ")";
    return os.str();
}

// Largest step <= h along axis k that keeps x +- h inside the domain.
double axis_step(const SurfaceChart& chart, const Vec& x, int k, double h) {
    const auto& box = chart.domain();
    if (box.periodic[static_cast<std::size_t>(k)]) return h;
    const double room = std::min(x(k) - box.lo[static_cast<std::size_t>(k)], box.hi[static_cast<std::size_t>(k)] - x(k));
    return std::min(h, 0.45 * room);
}

double g_overlap(const Vec& a, const Vec& b, const Mat& g) {
    const double ab = a.dot(g * b), aa = a.dot(g * a), bb = b.dot(g * b);
    return std::abs(ab) / std::sqrt(aa * bb);
}

// Root and focus derivatives of one branch along the u axes (Richardson-extrapolated
// central differences of the continued branch).
struct BranchDerivatives {
    Vec ds;  // d s / d u^k
    Mat dB;  // ambient, column k
};

BranchDerivatives branch_derivatives(const FrameField& field, const GeneratorData& gd, const FocusRecord& rec,
                                     const SingularOptions& opts) {
    const int d = field.n() - 1;
    BranchDerivatives out{Vec(d), Mat(rec.focus.size(), d)};
    for (int k = 0; k < d; ++k) {
        const double h = axis_step(field.chart(), gd.x, k, opts.h_rel * field.chart().domain().extent(k));
        auto diff = [&](double step, double& ds, Vec& dB) {
            Vec xp = gd.x, xm = gd.x;
            xp(k) += step;
            xm(k) -= step;
            const FocusRecord p = continue_focus(field, rec, gd.mp.g, xp, opts);
            const FocusRecord m = continue_focus(field, rec, gd.mp.g, xm, opts);
            ds = (p.root - m.root) / (2.0 * step);
            dB = (p.focus - m.focus) / (2.0 * step);
        };
        double d1, d2;
        Vec b1, b2;
        diff(h, d1, b1);
        diff(0.5 * h, d2, b2);
        out.ds(k) = (4.0 * d2 - d1) / 3.0;
        out.dB.col(k) = (4.0 * b2 - b1) / 3.0;
    }
    return out;
}

void classify_from(const GeneratorData& gd, FocusRecord& rec, const BranchDerivatives& bd, double scale,
                   const SingularOptions& opts) {
    if (rec.multiplicity >= 2) {
        rec.cls = FocusClass::conic;
        rec.drift = Vec();
        rec.s11 = 0.0;
        return;
    }
    const int d = static_cast<int>(bd.ds.size());
    // (ds + s omega_0^0 + omega_n^0)(d_k) = s_{1i} omega_0^i(d_k)
    Vec S(d);
    for (int k = 0; k < d; ++k) S(k) = bd.ds(k) + rec.root * gd.mp.omega_00(0, k) + gd.mp.omega_n0(0, k);
    const Mat theta_u = gd.mp.theta.leftCols(d);
    rec.drift = theta_u.transpose().partialPivLu().solve(S);
    rec.s11 = rec.drift.dot(rec.eigenspace.col(0));
    const double a = std::abs(rec.s11), s2 = scale * scale;
    if (a > opts.eps_fold * s2) rec.cls = FocusClass::fold;
    else if (a < opts.eps_conic * s2) rec.cls = FocusClass::conic;
    else rec.cls = FocusClass::indeterminate;
}

FocalRank rank_from(const FrameField& field, const GeneratorData& gd, const FocusRecord& rec,
                    const BranchDerivatives& bd, double scale, const SingularOptions& opts) {
    const int n = field.n(), d = n - 1;
    const GramMatrix& G = field.gram();
    const Mat& Ge = G.entries();
    // unit-speed directions on the base: metric in u coordinates is theta^T g theta
    const Mat theta_u = gd.mp.theta.leftCols(d);
    const Mat gu = theta_u.transpose() * gd.mp.g * theta_u;
    Eigen::LLT<Mat> llt(gu);
    const Mat Linv_T = llt.matrixL().transpose().solve(Mat::Identity(d, d));
    Mat J = bd.dB * Linv_T;
    // quotient by the point itself: (B, B) = 1
    const Vec& B = rec.focus;
    const double bb = B.dot(Ge * B);
    J -= B * ((B.transpose() * Ge * J) / bb);

    const Mat F = gd.frame.matrix();
    Mat C = F.partialPivLu().solve(J);
    Eigen::LLT<Mat> lg(gd.mp.g);
    const Mat LgT = lg.matrixL().transpose();
    Mat S(n + 2, d);
    S.row(0) = C.row(0) / (scale * scale);
    S.middleRows(1, d) = LgT * C.middleRows(1, d) / scale;
    S.row(n) = C.row(n) / scale;
    S.row(n + 1) = C.row(n + 1) / scale;

    Eigen::JacobiSVD<Mat> svd(S, Eigen::ComputeThinV);
    FocalRank fr;
    fr.singular_values = svd.singularValues();
    for (Eigen::Index i = 0; i < fr.singular_values.size(); ++i) {
        const double s = fr.singular_values(i);
        if (s > opts.rank_tol) {
            ++fr.est_dim;
            fr.tangent.push_back(J * svd.matrixV().col(i));
        }
        if (s >= opts.rank_band_lo && s <= opts.rank_band_hi) fr.ambiguous = true;
    }
    if (fr.est_dim == 0) {
        fr.causal_defined = false;
        return fr;
    }
    std::vector<Vec> basis{B};
    for (const auto& t : fr.tangent) basis.push_back(t);
    try {
        fr.causal = causal_character(basis, G, opts.causal_tol);
    } catch (const Error&) {
        fr.causal_defined = false;
    }
    return fr;
}

} // namespace

const char* to_string(FocusClass c) {
    switch (c) {
    case FocusClass::unset: return "unset";
    case FocusClass::fold: return "fold";
    case FocusClass::conic: return "conic";
    case FocusClass::indeterminate: return "indeterminate";
    }
    return "unknown";
}

RootGrouping cluster_roots(const Vec& roots, double tol_rel, double tol_gap, double scale_floor) {
    RootGrouping rg;
    if (roots.size() == 0) return rg;
    rg.scale = std::max({roots.cwiseAbs().maxCoeff(), scale_floor, 1e-300});
    rg.groups.push_back({0});
    for (Eigen::Index i = 1; i < roots.size(); ++i) {
        const double gap = roots(i) - roots(i - 1);
        if (gap < tol_rel * rg.scale) {
            rg.groups.back().push_back(static_cast<int>(i));
        } else {
            if (gap < tol_gap * rg.scale) rg.ambiguous = true;
            rg.groups.push_back({static_cast<int>(i)});
        }
    }
    return rg;
}

Vec normalize_homogeneous(const Vec& x, double tiny) {
    const double e0 = x(0);
    if (std::abs(e0) > tiny * x.norm()) return x / e0;
    Eigen::Index idx;
    x.cwiseAbs().maxCoeff(&idx);
    const Vec y = x / x.norm();
    return y(idx) < 0 ? Vec(-y) : y;
}

FocusSpectrum focus_spectrum(const MetricPair& mp, const AdaptedFrame& frame, const GramMatrix& G, double tol_rel,
                             double tol_gap, double scale_floor) {
    FocusSpectrum fs;
    fs.pencil = solve_symmetric_pencil(mp.lambda, mp.g);
    fs.grouping = cluster_roots(fs.pencil.roots, tol_rel, tol_gap, scale_floor);
    for (const auto& grp : fs.grouping.groups) {
        FocusRecord r;
        double sum = 0.0;
        for (int i : grp) sum += fs.pencil.roots(i);
        r.root = sum / static_cast<double>(grp.size());
        r.multiplicity = static_cast<int>(grp.size());
        r.eigenspace.resize(mp.g.rows(), r.multiplicity);
        for (std::size_t c = 0; c < grp.size(); ++c) r.eigenspace.col(static_cast<Eigen::Index>(c)) = fs.pencil.eigvecs.col(grp[c]);
        r.focus = frame.hypersphere() + r.root * frame.origin();
        const double bb = inner_product(r.focus, r.focus, G);
        r.on_quadric = std::abs(bb) < 1e-12 * r.focus.squaredNorm();
        fs.foci.push_back(std::move(r));
    }
    return fs;
}

GeneratorData analyze_generator(const FrameField& field, const Vec& x, const SingularOptions& opts) {
    const FrameSample s = field.sample(x);
    GeneratorData gd;
    gd.x = x;
    gd.frame = s.frame;
    gd.mp = metric_pair_from_slices(connection_slices(s), s.g, x(x.size() - 1));
    auto fs = focus_spectrum(gd.mp, gd.frame, field.gram(), opts.tol_rel, opts.tol_gap, chart_scale(field, opts));
    gd.spectrum = std::move(fs.pencil);
    gd.grouping = std::move(fs.grouping);
    gd.foci = std::move(fs.foci);
    return gd;
}

FocusRecord continue_focus(const FrameField& field, const FocusRecord& rec, const Mat& g, const Vec& x2,
                           const SingularOptions& opts) {
    (void)g;
    const GeneratorData gd = analyze_generator(field, x2, opts);
    int best = -1;
    double best_score = -1.0;
    for (std::size_t i = 0; i < gd.foci.size(); ++i) {
        const auto& f = gd.foci[i];
        if (f.multiplicity != rec.multiplicity) continue;
        double score;
        if (rec.multiplicity == 1) {
            score = g_overlap(rec.eigenspace.col(0), f.eigenspace.col(0), gd.mp.g);
            if (score < opts.overlap) continue;
        } else {
            score = -std::abs(f.root - rec.root);
        }
        if (best < 0 || score > best_score) {
            best = static_cast<int>(i);
            best_score = score;
        }
    }
    if (best < 0)
        throw Error(ErrorKind::branch_tracking, "root continuation failed near " + where(x2));
    return gd.foci[static_cast<std::size_t>(best)];
}

void fold_conic_classify(const FrameField& field, const GeneratorData& gd, FocusRecord& rec,
                         const SingularOptions& opts) {
    const double scale = chart_scale(field, opts);
    if (rec.multiplicity >= 2) {
        classify_from(gd, rec, BranchDerivatives{}, scale, opts);
        return;
    }
    classify_from(gd, rec, branch_derivatives(field, gd, rec, opts), scale, opts);
}

FocalRank focal_jacobian_rank(const FrameField& field, const GeneratorData& gd, const FocusRecord& rec,
                              const SingularOptions& opts) {
    return rank_from(field, gd, rec, branch_derivatives(field, gd, rec, opts), chart_scale(field, opts), opts);
}

int expected_focal_dim(FocusClass cls, int multiplicity, int n) {
    if (cls == FocusClass::fold) return n - 1;
    if (cls == FocusClass::conic) return n - multiplicity - 1;
    return -1;
}

FocalResult focal_manifold(const FrameField& field, const ParamGrid& grid, const std::vector<GeneratorData>& data,
                           const SingularOptions& opts, int ring) {
    if (data.size() != grid.size()) throw Error(ErrorKind::usage, "focal_manifold: data does not match grid");
    const double scale = chart_scale(field, opts);
    const int n = field.n();
    FocalResult res;

    // the most common multiplicity pattern defines the branches
    std::map<std::vector<int>, int> patterns;
    auto pattern_of = [](const GeneratorData& gd) {
        std::vector<int> p;
        for (const auto& f : gd.foci) p.push_back(f.multiplicity);
        return p;
    };
    for (const auto& gd : data) ++patterns[pattern_of(gd)];
    std::vector<int> ref;
    int best = -1;
    for (const auto& [p, c] : patterns)
        if (c > best) {
            best = c;
            ref = p;
        }

    for (std::size_t b = 0; b < ref.size(); ++b) {
        FocalManifold fm;
        fm.branch = static_cast<int>(b);
        fm.multiplicity = ref[b];
        res.branches.push_back(std::move(fm));
    }

    for (std::size_t p = 0; p < data.size(); ++p) {
        const auto& gd = data[p];
        const auto pat = pattern_of(gd);
        if (pat != ref) {
            BranchEvent ev;
            ev.index = p;
            ev.kind = pat.size() < ref.size() ? "merge" : "split";
            ev.detail = "multiplicity pattern changes at u = " + where(gd.x.head(n - 1));
            res.events.push_back(std::move(ev));
            continue;
        }
        for (std::size_t b = 0; b < ref.size(); ++b) {
            FocalSample s;
            s.index = p;
            s.record = gd.foci[b];
            try {
                const BranchDerivatives bd = branch_derivatives(field, gd, s.record, opts);
                classify_from(gd, s.record, bd, scale, opts);
                s.rank = rank_from(field, gd, s.record, bd, scale, opts);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::branch_tracking && e.kind() != ErrorKind::domain) throw;
                s.tracked = false;
                s.record.cls = FocusClass::indeterminate;
                s.note = e.what();
                BranchEvent ev;
                ev.index = p;
                ev.kind = "tracking";
                ev.detail = e.what();
                res.events.push_back(std::move(ev));
            }
            res.branches[b].samples.push_back(std::move(s));
        }
    }

    for (auto& fm : res.branches) {
        std::map<int, int> dims;
        std::map<FocusClass, int> classes;
        int spacelike = 0, timelike = 0, lightlike = 0, causal_count = 0;
        for (const auto& s : fm.samples) {
            if (!s.tracked || grid.ring(s.index) < ring) continue;
            ++fm.interior_count;
            ++dims[s.rank.est_dim];
            ++classes[s.record.cls];
            if (s.rank.causal_defined) {
                ++causal_count;
                if (s.rank.causal == CausalCharacter::spacelike) ++spacelike;
                else if (s.rank.causal == CausalCharacter::timelike) ++timelike;
                else ++lightlike;
            }
            const bool unambiguous = !s.rank.ambiguous && !data[s.index].grouping.ambiguous &&
                                     (s.record.cls == FocusClass::fold || s.record.cls == FocusClass::conic);
            if (unambiguous && expected_focal_dim(s.record.cls, s.record.multiplicity, n) != s.rank.est_dim)
                ++fm.agreement_failures;
        }
        int top = -1;
        for (const auto& [dim, c] : dims)
            if (c > top) {
                top = c;
                fm.est_dim = dim;
            }
        top = -1;
        for (const auto& [cls, c] : classes)
            if (c > top) {
                top = c;
                fm.cls = cls;
            }
        if (causal_count > 0) {
            fm.spacelike_fraction = static_cast<double>(spacelike) / causal_count;
            fm.timelike_fraction = static_cast<double>(timelike) / causal_count;
            fm.lightlike_fraction = static_cast<double>(lightlike) / causal_count;
        }
    }
    return res;
}

DegeneracyReport degeneracy_report(const FrameField& field, const std::vector<GeneratorData>& data, double scale,
                                   double const_tol) {
    DegeneracyReport rep;
    const int n = field.n();
    auto rank_of = [](const Mat& m) {
        Eigen::JacobiSVD<Mat> svd(m);
        const Vec& s = svd.singularValues();
        int r = 0;
        for (Eigen::Index i = 0; i < s.size(); ++i)
            if (s(i) > 1e-12 * s(0)) ++r;
        return r;
    };
    bool single = !data.empty();
    double lo = 0.0, hi = 0.0;
    for (std::size_t p = 0; p < data.size(); ++p) {
        const auto& gd = data[p];
        int r;
        if (gd.mp.nu_defined) {
            r = rank_of(gd.mp.nu);
        } else {
            // nu in a gauge away from every root of this generator
            ++rep.singular_lambda_points;
            const double shift = 1.0 + gd.spectrum.roots.cwiseAbs().maxCoeff();
            Vec x2 = gd.x;
            x2(n - 1) += shift;
            const MetricPair mp2 = extract_metric_pair(field, x2);
            r = mp2.nu_defined ? rank_of(mp2.nu) : 0;
        }
        rep.nu_rank.push_back(r);
        if (r < n - 1) rep.full_rank = false;
        if (gd.foci.size() != 1 || gd.foci[0].multiplicity != n - 1) {
            single = false;
        } else {
            const double s = gd.foci[0].root;
            lo = p == 0 ? s : std::min(lo, s);
            hi = p == 0 ? s : std::max(hi, s);
        }
    }
    rep.extreme_case = single && (hi - lo) <= const_tol * std::max(scale, 1e-300);
    std::ostringstream os;
    os << (rep.full_rank ? "rank(nu) = n-1 at every sample" : "rank(nu) drops below n-1");
    if (rep.singular_lambda_points > 0)
        os << "; lambda singular in the working gauge at " << rep.singular_lambda_points << " samples";
    if (rep.extreme_case)
        os << "; single constant focus of multiplicity n-1: the hypersurface is a hypersphere and the "
              "lightlike hypersurface is its isotropic cone";
    rep.summary = os.str();
    return rep;
}

} // namespace lightlike
