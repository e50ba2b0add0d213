#include "lightlike/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <optional>
#include <thread>

namespace lightlike {

namespace {

std::vector<double> to_std(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Json focus_json(const PointFocus& f) {
    Json j = {
        {"branch", f.branch},
        {"root", f.record.root},
        {"multiplicity", f.record.multiplicity},
        {"class", to_string(f.record.cls)},
        {"s11", f.record.s11},
        {"focus", focus_coordinates(f.record)},
        {"focal_dim", f.rank.est_dim},
        {"rank_ambiguous", f.rank.ambiguous},
        {"singular_values", to_std(f.rank.singular_values)},
    };
    j["causal"] = f.rank.causal_defined ? Json(to_string(f.rank.causal)) : Json(nullptr);
    return j;
}

Json point_json(const PointRecord& p) {
    Json foci = Json::array();
    for (const auto& f : p.foci) foci.push_back(focus_json(f));
    return {
        {"index", p.index},
        {"u", to_std(p.u)},
        {"roots", to_std(p.roots)},
        {"grouping_ambiguous", p.grouping_ambiguous},
        {"foci", foci},
        {"lambda_bar", p.lambda_bar},
        {"normalization_defined", p.normalization_defined},
        {"nu_defined", p.nu_defined},
        {"residuals",
         {{"frame_rcond", p.frame_rcond},
          {"pfaffian", p.pfaffian},
          {"duality", p.nu_defined ? Json(p.duality) : Json(nullptr)},
          {"coframe", p.coframe},
          {"apolarity", p.apolarity},
          {"vieta", p.vieta},
          {"symmetry_defect", p.symmetry_defect},
          {"mean_residual", p.mean_residual}}},
    };
}

// Runs fn over the grid, collecting per-point failures under `stage`.
void for_each_point(ClassificationReport& rep, const std::string& stage,
                    const std::function<void(std::size_t)>& fn) {
    std::vector<std::optional<StageFailure>> fails(rep.grid.size());
    parallel_for(rep.grid.size(), [&](std::size_t p) {
        try {
            fn(p);
        } catch (const Error& e) {
            fails[p] = StageFailure{p, rep.grid.point(p), stage, e.kind(), e.what()};
        }
    });
    for (auto& f : fails)
        if (f) rep.failures.push_back(std::move(*f));
}

} // namespace

int worker_count() {
    int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("LIGHTLIKE_WORKERS")) {
        const int cap = std::atoi(env);
        if (cap > 0) n = std::min(n, cap);
    }
    return n;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(worker_count()), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    auto run = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

int ClassificationReport::exit_code() const {
    return failures.empty() ? kExitOk : exit_code_for(failures.front().kind);
}

SingularOptions singular_options(const RunConfig& cfg, double scale) {
    SingularOptions o;
    o.scale = scale;
    o.tol_rel = cfg.tolerance("root_tol_rel");
    o.tol_gap = cfg.tolerance("root_tol_gap");
    o.eps_fold = cfg.tolerance("eps_fold");
    o.eps_conic = cfg.tolerance("eps_conic");
    o.overlap = cfg.tolerance("overlap");
    o.h_rel = cfg.tolerance("continuation_h");
    o.rank_tol = cfg.tolerance("rank");
    o.rank_band_lo = cfg.tolerance("rank_band_lo");
    o.rank_band_hi = cfg.tolerance("rank_band_hi");
    o.causal_tol = cfg.tolerance("causal");
    return o;
}

std::vector<double> focus_coordinates(const FocusRecord& rec) { return to_std(normalize_homogeneous(rec.focus)); }

ClassificationReport run_classify(const RunConfig& cfg) {
    ClassificationReport rep;
    rep.config = cfg;
    rep.chart = make_chart(cfg.surface);
    FrameFieldOptions fo;
    fo.jets = cfg.jets;
    rep.field = std::make_unique<ChartFrameField>(*rep.chart, fo);
    rep.grid = ParamGrid{cfg.grid, rep.chart->domain()};
    const std::size_t N = rep.grid.size();
    const ChartFrameField& field = *rep.field;
    auto x_of = [&](std::size_t p) { return hypersurface_point(rep.grid.point(p), 0.0); };

    // Pass 1: roots, for the curvature scale.
    std::vector<double> max_root(N, 0.0);
    for_each_point(rep, "metric", [&](std::size_t p) {
        const MetricPair mp = extract_metric_pair(field, x_of(p));
        max_root[p] = solve_symmetric_pencil(mp.lambda, mp.g, 1e-6).roots.cwiseAbs().maxCoeff();
    });
    if (!rep.complete()) return rep;
    rep.scale = *std::max_element(max_root.begin(), max_root.end());
    if (!(rep.scale > 0.0)) rep.scale = rep.chart->curvature_scale();
    const SingularOptions so = singular_options(cfg, rep.scale);

    // Pass 2: generators and per-point residuals.
    rep.data.resize(N);
    rep.points.resize(N);
    for_each_point(rep, "foci", [&](std::size_t p) {
        PointRecord& pr = rep.points[p];
        pr.index = p;
        pr.u = rep.grid.point(p);
        const Vec x = x_of(p);
        const FrameSample s = field.sample(x);
        pr.frame_rcond = frame_rcond(s.frame);
        for (const auto& slice : connection_slices(s)) pr.pfaffian = std::max(pr.pfaffian, pfaffian_residuals(slice, s.g).max());
        GeneratorData& gd = rep.data[p];
        gd = analyze_generator(field, x, so);
        pr.roots = gd.spectrum.roots;
        pr.grouping_ambiguous = gd.grouping.ambiguous;
        pr.nu_defined = gd.mp.nu_defined;
        pr.duality = gd.mp.duality_residual;
        pr.coframe = gd.mp.coframe_residual;
    });
    if (!rep.complete()) return rep;

    for_each_point(rep, "normalization", [&](std::size_t p) {
        PointRecord& pr = rep.points[p];
        ThirdOrderOptions to;
        const NormalizationData nd = normalize_generator(field, x_of(p), rep.scale, to);
        pr.lambda_bar = nd.lambda_bar;
        pr.vieta = nd.vieta_defect;
        pr.apolarity = nd.tf.apolarity;
        pr.normalization_defined = nd.defined;
        pr.symmetry_defect = nd.third.symmetry_defect;
        pr.mean_residual = nd.third.mean_residual;
    });
    if (!rep.complete()) return rep;

    try {
        rep.focal = focal_manifold(field, rep.grid, rep.data, so);
    } catch (const Error& e) {
        rep.failures.push_back(StageFailure{0, Vec(), "focal_manifold", e.kind(), e.what()});
        return rep;
    }
    for (const auto& b : rep.focal.branches)
        for (const auto& s : b.samples) rep.points[s.index].foci.push_back(PointFocus{b.branch, s.record, s.rank});

    rep.degeneracy = degeneracy_report(field, rep.data, rep.scale);
    return rep;
}

Json report_to_json(const ClassificationReport& rep) {
    const RunConfig& c = rep.config;
    Json j;
    j["surface"] = to_string(c.surface.family);
    j["n"] = c.n;
    j["grid"] = c.grid;
    j["point_count"] = rep.grid.size();
    j["scale"] = rep.scale;
    j["complete"] = rep.complete();

    Json fails = Json::array();
    for (const auto& f : rep.failures)
        fails.push_back({{"index", f.index}, {"u", to_std(f.u)}, {"stage", f.stage}, {"kind", to_string(f.kind)},
                         {"message", f.message}});
    j["failures"] = fails;

    Json branches = Json::array();
    for (const auto& b : rep.focal.branches)
        branches.push_back({{"branch", b.branch},
                            {"multiplicity", b.multiplicity},
                            {"focal_dim", b.est_dim},
                            {"class", to_string(b.cls)},
                            {"expected_dim", expected_focal_dim(b.cls, b.multiplicity, c.n)},
                            {"spacelike_fraction", b.spacelike_fraction},
                            {"timelike_fraction", b.timelike_fraction},
                            {"lightlike_fraction", b.lightlike_fraction},
                            {"interior_samples", b.interior_count},
                            {"sample_count", b.samples.size()},
                            {"class_rank_disagreements", b.agreement_failures}});
    j["branches"] = branches;

    Json events = Json::array();
    for (const auto& e : rep.focal.events)
        events.push_back({{"index", e.index}, {"kind", e.kind}, {"detail", e.detail}});
    j["events"] = events;

    j["degeneracy"] = {{"nu_full_rank", rep.degeneracy.full_rank},
                       {"extreme_case", rep.degeneracy.extreme_case},
                       {"singular_lambda_points", rep.degeneracy.singular_lambda_points},
                       {"summary", rep.degeneracy.summary}};

    Json pts = Json::array();
    for (const auto& p : rep.points) pts.push_back(point_json(p));
    j["points"] = pts;
    return j;
}

void write_json(const Json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::io, "cannot write " + path);
    out << j.dump(1) << '\n';
    if (!out) throw Error(ErrorKind::io, "write failed for " + path);
}

} // namespace lightlike
