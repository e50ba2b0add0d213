#include "lightlike/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lightlike {

namespace {

std::string sci(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

// Worst value over a set of measurements, compared against a tolerance.
class Tally {
public:
    Tally(std::string name, double tol) { r_.name = std::move(name), r_.tolerance = tol; }

    void add(double v, const std::string& where = {}) {
        if (std::isnan(v) || v > r_.value) {
            if (!std::isnan(r_.value) || std::isnan(v)) {
                r_.value = v;
                worst_ = where;
            }
        }
        ++count_;
    }
    void note(const std::string& s) { notes_ += (notes_.empty() ? "" : "; ") + s; }
    void fail_with(const std::string& s) {
        forced_fail_ = true;
        note(s);
    }

    CheckResult done() {
        if (count_ == 0 && !forced_fail_) {
            r_.status = CheckStatus::skipped;
            r_.detail = notes_.empty() ? "no samples" : notes_;
            return r_;
        }
        const bool ok = !forced_fail_ && !std::isnan(r_.value) && r_.value <= r_.tolerance;
        r_.status = ok ? CheckStatus::pass : CheckStatus::fail;
        std::string d = std::to_string(count_) + " samples";
        if (!worst_.empty()) d += ", worst at " + worst_;
        if (!notes_.empty()) d += "; " + notes_;
        r_.detail = d;
        return r_;
    }

private:
    CheckResult r_;
    std::string worst_, notes_;
    int count_ = 0;
    bool forced_fail_ = false;
};

std::string at_u(const Vec& u) {
    std::ostringstream os;
    os.precision(6);
    os << "u = (";
    for (Eigen::Index i = 0; i < u.size(); ++i) os << (i ? ", " : "") << u(i);
    os << ")";
    return os.str();
}

std::vector<double> nonzero(const std::vector<double>& g) {
    std::vector<double> out;
    for (double s : g)
        if (s != 0.0) out.push_back(s);
    return out;
}

} // namespace

const char* to_string(CheckStatus s) {
    switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skipped: return "skipped";
    }
    return "?";
}

const CheckResult* VerifyResult::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

bool PlaquetteConvergence::exact(std::size_t i, double floor) const {
    return std::all_of(residuals[i].begin(), residuals[i].end(), [&](double r) { return r < floor; });
}

bool PlaquetteConvergence::second_order(double lo, double hi, double floor) const {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (exact(i, floor)) continue;
        for (double r : ratios[i])
            if (!(r >= lo && r <= hi)) return false;
    }
    return true;
}

PlaquetteConvergence plaquette_convergence(const FrameField& field, const Vec& x, const Vec& v, const Vec& w,
                                           double h) {
    std::array<PlaquetteReport, 3> reps;
    for (int k = 0; k < 3; ++k) reps[k] = plaquette_check(field, x, v, w, h / std::pow(2.0, k));
    PlaquetteConvergence pc;
    pc.labels.push_back("structure");
    pc.residuals.push_back({reps[0].structure, reps[1].structure, reps[2].structure});
    for (std::size_t e = 0; e < reps[0].curvature.entries.size(); ++e) {
        pc.labels.push_back(reps[0].curvature.entries[e].first);
        pc.residuals.push_back({reps[0].curvature.entries[e].second, reps[1].curvature.entries[e].second,
                                reps[2].curvature.entries[e].second});
    }
    for (const auto& r : pc.residuals) pc.ratios.push_back({r[0] / r[1], r[1] / r[2]});
    return pc;
}

ScreenFrameField invariant_screen(const ChartFrameField& base, double twist, double gauge, bool richardson) {
    const ChartFrameField* b = &base;
    auto tau = [b, twist, gauge](const Vec& u) {
        const NormalizationData nd = normalize_generator(*b, hypersurface_point(u, gauge), b->chart().curvature_scale());
        if (!nd.defined) throw Error(ErrorKind::geometry, nd.undefined_reason);
        Vec t = nd.tau;
        if (twist != 0.0) {
            t(0) += twist * u(1);
            t(1) -= twist * u(0);
        }
        return t;
    };
    return ScreenFrameField(base, tau, 1e-4, richardson);
}

std::vector<std::size_t> interior_samples(const ParamGrid& grid, int count, int ring) {
    std::vector<std::size_t> cand;
    for (std::size_t p = 0; p < grid.size(); ++p)
        if (grid.ring(p) >= ring) cand.push_back(p);
    std::vector<std::size_t> out;
    if (cand.empty() || count <= 0) return out;
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(count), cand.size());
    // offset by a prime stride so samples do not line up on one parameter row
    for (std::size_t i = 0; i < k; ++i) out.push_back(cand[(i * cand.size() / k + i * 7) % cand.size()]);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

VerifyResult run_verify(const ClassificationReport& rep) {
    VerifyResult vr;
    if (!rep.complete()) {
        vr.exit_code = rep.exit_code();
        return vr;
    }
    const RunConfig& cfg = rep.config;
    const ChartFrameField& field = *rep.field;
    const GramMatrix& G = field.gram();
    const int n = cfg.n, d = n - 1;
    const std::size_t N = rep.grid.size();
    const double scale = rep.scale;
    auto tol = [&](const char* name) { return cfg.tolerance(name); };
    const std::vector<double> gauges = nonzero(resolved_gauges(cfg));
    const SingularOptions so = singular_options(cfg, scale);
    const std::vector<std::size_t> probes = interior_samples(rep.grid, 5);

    // pencil: n-1 real roots and simultaneous diagonalization
    {
        Tally count("pencil.real_roots", 0.0), diag("pencil.diagonalization", tol("diagonalization"));
        for (std::size_t p = 0; p < N; ++p) {
            const auto& gd = rep.data[p];
            const Vec& r = gd.spectrum.roots;
            const bool ok = r.size() == d && r.allFinite();
            count.add(ok ? 0.0 : 1.0, at_u(rep.points[p].u));
            const Mat& V = gd.spectrum.eigvecs;
            const double e1 = max_abs(V.transpose() * gd.mp.g * V - Mat::Identity(d, d));
            const Mat D = r.asDiagonal();
            const double e2 = max_abs(V.transpose() * gd.mp.lambda * V - D) / std::max(1.0, max_abs(gd.mp.lambda));
            diag.add(std::max(e1, e2), at_u(rep.points[p].u));
        }
        vr.checks.push_back(count.done());
        vr.checks.push_back(diag.done());
    }

    // lift: null-lift identity over pairs, FD derivative of A_0
    {
        Tally lift("lift.null_identity", tol("lift")), fd("lift.fd_derivative", tol("lift_fd"));
        for (std::size_t p = 0; p < N; p += std::max<std::size_t>(1, N / 64)) {
            const std::size_t q = (p * 7 + N / 2) % N;
            const Vec rp = rep.chart->point(rep.points[p].u), rq = rep.chart->point(rep.points[q].u);
            const double lhs = inner_product(rep.data[p].frame.origin(), rep.data[q].frame.origin(), G);
            const double dist2 = (rp - rq).squaredNorm();
            lift.add(std::abs(lhs + 0.5 * dist2) / std::max(1.0, dist2), at_u(rep.points[p].u));
        }
        for (std::size_t p : probes) {
            const Vec x = hypersurface_point(rep.points[p].u, 0.0);
            const AdaptedFrame f = field.frame(x);
            for (int k = 0; k < d; ++k) {
                const double h = 1e-4 * rep.chart->domain().extent(k);
                Vec xp = x, xm = x;
                xp(k) += h;
                xm(k) -= h;
                const Vec dA0 = (field.frame(xp).origin() - field.frame(xm).origin()) / (2.0 * h);
                fd.add((dA0 - f.A[static_cast<std::size_t>(k + 1)]).norm() / std::max(1.0, dA0.norm()),
                       at_u(rep.points[p].u));
            }
        }
        vr.checks.push_back(lift.done());
        vr.checks.push_back(fd.done());
    }

    // frames: adapted Gram pattern (also after gauge shifts) and conditioning
    {
        Tally gram("frame.gram", tol("gram")), cond("frame.rcond", 0.0);
        double worst_rcond = 1.0;
        std::vector<double> shifts = {0.0};
        shifts.insert(shifts.end(), gauges.begin(), gauges.end());
        for (std::size_t p = 0; p < N; ++p) {
            const auto& gd = rep.data[p];
            const Mat pattern = frame_pattern(gd.mp.g);
            for (double s : shifts)
                gram.add(max_abs(validate_gram(gauge_shift(gd.frame, s).A, G, pattern)), at_u(rep.points[p].u));
            worst_rcond = std::min(worst_rcond, rep.points[p].frame_rcond);
        }
        // recorded as 1/rcond against the extraction limit
        cond = Tally("frame.rcond", 1e13);
        cond.add(1.0 / worst_rcond);
        vr.checks.push_back(gram.done());
        vr.checks.push_back(cond.done());
    }

    // connection forms
    {
        Tally pf("cartan.pfaffian", tol("pfaffian"));
        std::vector<std::string> labels;
        for (std::size_t p = 0; p < N; ++p) {
            const FrameSample s = field.sample(hypersurface_point(rep.points[p].u, 0.0));
            for (auto slice : connection_slices(s)) {
                if (cfg.corrupt_omega_nn) slice.omega(n, n) = 1.0;
                const ResidualReport rr = pfaffian_residuals(slice, s.g);
                pf.add(rr.max(), at_u(rep.points[p].u));
                for (const auto& l : rr.above(tol("pfaffian")))
                    if (std::find(labels.begin(), labels.end(), l) == labels.end()) labels.push_back(l);
            }
        }
        if (cfg.corrupt_omega_nn) pf.note("fault injection: omega_n^n corrupted");
        if (!labels.empty()) {
            std::string s = "relations above tolerance:";
            for (const auto& l : labels) s += " " + l;
            pf.note(s);
        }
        vr.checks.push_back(pf.done());

        Tally lin("cartan.linearity", tol("linearity"));
        for (std::size_t p : probes) {
            const Vec x = hypersurface_point(rep.points[p].u, 0.0);
            const Vec v = Vec::LinSpaced(n, 1.0, -0.5), w = Vec::LinSpaced(n, 0.25, 2.0);
            const Mat lhs = connection_matrix(field, x, 1.5 * v - 0.75 * w).omega;
            const Mat rhs = 1.5 * connection_matrix(field, x, v).omega - 0.75 * connection_matrix(field, x, w).omega;
            lin.add(max_abs(lhs - rhs) / std::max(1.0, max_abs(lhs)), at_u(rep.points[p].u));
        }
        vr.checks.push_back(lin.done());

        Tally dual("cartan.duality", tol("duality")), cof("cartan.coframe", tol("coframe"));
        const double det_floor = tol("det_lambda") * std::pow(scale, d);
        for (std::size_t p = 0; p < N; ++p) {
            const auto& mp = rep.data[p].mp;
            if (!mp.nu_defined || std::abs(mp.lambda.determinant()) <= det_floor) continue;
            dual.add(mp.duality_residual, at_u(rep.points[p].u));
            cof.add(mp.coframe_residual / std::max(1.0, max_abs(mp.nu)), at_u(rep.points[p].u));
        }
        vr.checks.push_back(dual.done());
        vr.checks.push_back(cof.done());

        Tally gc("cartan.gauge_covariance", tol("gauge_lambda"));
        for (std::size_t p = 0; p < N && !gauges.empty(); ++p) {
            const auto& base = rep.data[p].mp;
            for (double s : gauges) {
                const MetricPair mp = extract_metric_pair(field, hypersurface_point(rep.points[p].u, s));
                double e = std::max(max_abs(mp.lambda - (base.lambda - s * base.g)), max_abs(mp.g - base.g));
                if (mp.nu_defined && base.nu_defined) {
                    // nu transforms as -g (lambda - s g)^{-1} g
                    const Mat pred = -base.g * (base.lambda - s * base.g).inverse() * base.g;
                    e = std::max(e, max_abs(mp.nu - pred) / std::max(1.0, max_abs(pred)));
                }
                gc.add(e, at_u(rep.points[p].u));
            }
        }
        if (gauges.empty()) gc.note("no nonzero gauge shifts configured");
        vr.checks.push_back(gc.done());

        Tally pq("cartan.plaquette_order", 0.0);
        const double h = tol("plaquette_h") * rep.chart->domain().max_extent();
        const ScreenFrameField screen = invariant_screen(field);
        for (std::size_t p : probes) {
            const Vec x = hypersurface_point(rep.points[p].u, 0.3);
            const Vec v = Vec::Unit(n, 0);
            const Vec w = Vec::Unit(n, 1) + 0.5 * Vec::Unit(n, n - 1);
            PlaquetteConvergence pc;
            try {
                pc = plaquette_convergence(screen, x, v, w, h);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::geometry) throw;
                pc = plaquette_convergence(field, x, v, w, h);
            }
            const bool ok =
                pc.second_order(tol("plaquette_ratio_lo"), tol("plaquette_ratio_hi"), tol("plaquette_floor"));
            pq.add(ok ? 0.0 : 1.0, at_u(rep.points[p].u));
            if (!ok)
                for (std::size_t i = 0; i < pc.labels.size(); ++i)
                    pq.note(pc.labels[i] + " ratios " + sci(pc.ratios[i][0]) + ", " + sci(pc.ratios[i][1]));
        }
        vr.checks.push_back(pq.done());
    }

    // foci
    {
        Tally cnt("singular.focus_count", 0.0);
        for (std::size_t p = 0; p < N; ++p) {
            int m = 0;
            for (const auto& f : rep.data[p].foci) m += f.multiplicity;
            cnt.add(std::abs(m - d), at_u(rep.points[p].u));
        }
        vr.checks.push_back(cnt.done());

        Tally gi("singular.gauge_invariance", tol("gauge_points"));
        for (std::size_t p = 0; p < N && !gauges.empty(); ++p) {
            const auto& base = rep.data[p].foci;
            for (double s : gauges) {
                const GeneratorData gd = analyze_generator(field, hypersurface_point(rep.points[p].u, s), so);
                if (gd.foci.size() != base.size()) {
                    gi.fail_with("focus count changes under gauge shift at " + at_u(rep.points[p].u));
                    continue;
                }
                for (std::size_t h = 0; h < base.size(); ++h)
                    gi.add((normalize_homogeneous(gd.foci[h].focus) - normalize_homogeneous(base[h].focus))
                               .cwiseAbs()
                               .maxCoeff(),
                           at_u(rep.points[p].u));
            }
        }
        if (gauges.empty()) gi.note("no nonzero gauge shifts configured");
        vr.checks.push_back(gi.done());

        Tally agree("singular.class_rank_agreement", 0.0), conic("singular.conic_spacelike", 0.0);
        for (const auto& b : rep.focal.branches) {
            agree.add(b.agreement_failures, "branch " + std::to_string(b.branch));
            for (const auto& s : b.samples) {
                if (s.record.cls != FocusClass::conic || !s.rank.causal_defined || s.rank.ambiguous) continue;
                conic.add(s.rank.causal == CausalCharacter::spacelike ? 0.0 : 1.0, at_u(rep.points[s.index].u));
            }
        }
        vr.checks.push_back(agree.done());
        vr.checks.push_back(conic.done());
    }

    // normalization
    {
        const double rel = std::max(1.0, scale);
        Tally apo("normalization.apolarity", tol("apolarity")), vieta("normalization.vieta", tol("vieta") * rel),
            shift("normalization.spectral_shift", tol("spectral_shift") * rel),
            third("normalization.third_order", tol("third_order"));
        for (std::size_t p = 0; p < N; ++p) {
            const auto& pr = rep.points[p];
            const auto& gd = rep.data[p];
            apo.add(pr.apolarity, at_u(pr.u));
            vieta.add(pr.vieta, at_u(pr.u));
            const TraceFree tf = trace_free_tensor(gd.mp, pr.lambda_bar);
            const Vec ar = solve_symmetric_pencil(tf.a, gd.mp.g, 1e-6).roots;
            shift.add((ar - (gd.spectrum.roots.array() - pr.lambda_bar).matrix()).cwiseAbs().maxCoeff(), at_u(pr.u));
            third.add(std::max(pr.symmetry_defect, pr.mean_residual), at_u(pr.u));
        }
        ThirdOrderOptions fdo;
        fdo.route = ThirdOrderRoute::finite_difference;
        for (std::size_t p : probes) {
            const ThirdOrder t = third_order(field, hypersurface_point(rep.points[p].u, 0.0), fdo);
            third.add(std::max(t.symmetry_defect, t.mean_residual), at_u(rep.points[p].u) + " (difference route)");
        }
        vr.checks.push_back(apo.done());
        vr.checks.push_back(vieta.done());
        vr.checks.push_back(shift.done());
        vr.checks.push_back(third.done());

        Tally gi("normalization.gauge_invariance", tol("gauge_points"));
        for (std::size_t p = 0; p < N && !gauges.empty(); ++p) {
            if (!rep.points[p].normalization_defined) continue;
            const NormalizationData base = normalize_generator(field, hypersurface_point(rep.points[p].u, 0.0), scale);
            for (double s : gauges) {
                const NormalizationData nd = normalize_generator(field, hypersurface_point(rep.points[p].u, s), scale);
                if (!nd.defined) {
                    gi.fail_with("normalization becomes undefined under gauge shift at " + at_u(rep.points[p].u));
                    continue;
                }
                const double e = std::max({max_abs(nd.tf.a - base.tf.a), principal_angle(nd.C, base.C),
                                           principal_angle(nd.points.zeta, base.points.zeta)});
                gi.add(e, at_u(rep.points[p].u));
            }
        }
        if (gauges.empty()) gi.note("no nonzero gauge shifts configured");
        vr.checks.push_back(gi.done());

        Tally scr("normalization.screen_agreement", 0.0);
        ScreenOptions sopt;
        sopt.rel_tol = tol("screen_rel");
        const ScreenFrameField inv = invariant_screen(field);
        const ScreenFrameField twisted = invariant_screen(field, cfg.screen_rotation);
        const double g0 = gauges.empty() ? 0.0 : gauges.front();
        const ScreenFrameField shifted = invariant_screen(field, 0.0, g0);
        int integrable = 0, non_integrable = 0, indeterminate = 0;
        for (std::size_t p : interior_samples(rep.grid, cfg.screen_samples)) {
            if (!rep.points[p].normalization_defined) continue;
            const Vec x = hypersurface_point(rep.points[p].u, rep.points[p].lambda_bar);
            try {
                const ScreenResult a = screen_mu(inv, x, sopt);
                scr.add(a.agree ? 0.0 : 1.0, at_u(rep.points[p].u));
                (a.verdict == Verdict::integrable ? integrable
                 : a.verdict == Verdict::non_integrable ? non_integrable
                                                         : indeterminate)++;
                if (!gauges.empty() && screen_mu(shifted, x, sopt).verdict != a.verdict)
                    scr.fail_with("verdict changes with the gauge of the screen at " + at_u(rep.points[p].u));
                if (cfg.screen_rotation != 0.0) {
                    const ScreenResult b = screen_mu(twisted, x, sopt);
                    scr.add(b.agree ? 0.0 : 1.0, at_u(rep.points[p].u) + " (twisted)");
                    if (b.verdict != Verdict::non_integrable)
                        scr.fail_with("twisted screen not detected at " + at_u(rep.points[p].u));
                }
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::geometry && e.kind() != ErrorKind::assumption) throw;
                scr.note("skipped " + at_u(rep.points[p].u) + ": " + e.what());
            }
        }
        scr.note("invariant screen verdicts: " + std::to_string(integrable) + " integrable, " +
                 std::to_string(non_integrable) + " non-integrable, " + std::to_string(indeterminate) +
                 " indeterminate");
        vr.checks.push_back(scr.done());
    }

    vr.exit_code = kExitOk;
    for (const auto& c : vr.checks)
        if (c.status == CheckStatus::fail) vr.exit_code = kExitCheckFailure;
    return vr;
}

Json verify_to_json(const VerifyResult& v, const ClassificationReport& rep) {
    Json checks = Json::array();
    for (const auto& c : v.checks)
        checks.push_back({{"name", c.name},
                          {"status", to_string(c.status)},
                          {"value", c.value},
                          {"tolerance", c.tolerance},
                          {"detail", c.detail}});
    Json j;
    j["surface"] = to_string(rep.config.surface.family);
    j["n"] = rep.config.n;
    j["grid"] = rep.config.grid;
    j["gauges"] = resolved_gauges(rep.config);
    j["exit_code"] = v.exit_code;
    j["checks"] = checks;
    if (!rep.complete()) j["failures"] = report_to_json(rep)["failures"];
    return j;
}

} // namespace lightlike
