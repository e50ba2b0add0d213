#include "lightlike/config.hpp"

#include "lightlike/error.hpp"

#include <fstream>
#include <random>
#include <sstream>

namespace lightlike {

namespace {

const Json& tolerance_defaults() {
    static const Json t = {
        {"root_tol_rel", 1e-6},   {"root_tol_gap", 1e-3},       {"eps_fold", 1e-4},
        {"eps_conic", 1e-6},      {"overlap", 0.7},             {"continuation_h", 1e-3},
        {"rank", 1e-5},           {"rank_band_lo", 1e-6},       {"rank_band_hi", 1e-4},
        {"causal", 1e-7},         {"diagonalization", 1e-10},   {"lift", 1e-10},
        {"gram", 1e-10},          {"lift_fd", 1e-6},            {"coframe", 1e-7},
        {"pfaffian", 1e-8},       {"linearity", 1e-10},
        {"gauge_lambda", 1e-8},   {"gauge_points", 1e-7},       {"duality", 1e-7},
        {"det_lambda", 1e-6},     {"apolarity", 1e-10},         {"vieta", 1e-10},
        {"spectral_shift", 1e-9}, {"third_order", 1e-5},        {"screen_rel", 1e-5},
        {"plaquette_h", 3e-3},    {"plaquette_floor", 1e-8},    {"plaquette_ratio_lo", 3.0},  {"plaquette_ratio_hi", 5.0},
    };
    return t;
}

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorKind::config, msg); }

void check_keys(const Json& obj, const Json& allowed, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.contains(it.key())) bad("unknown config key '" + where + it.key() + "'");
}

template <class T>
T get(const Json& j, const char* key, const std::string& where) {
    try {
        return j.at(key).get<T>();
    } catch (const Json::exception&) {
        bad("config key '" + where + key + "' has the wrong type");
    }
}

JetMode jet_mode(const std::string& s) {
    if (s == "automatic") return JetMode::automatic;
    if (s == "closed_form") return JetMode::closed_form;
    if (s == "finite_difference") return JetMode::finite_difference;
    bad("fd.mode must be automatic, closed_form or finite_difference");
}

SurfaceSpec parse_surface(const Json& s, int n) {
    const std::string family = get<std::string>(s, "family", "surface.");
    const SurfaceFamily fam = family_from_string(family);
    SurfaceSpec spec;
    if (fam == SurfaceFamily::table_samples) {
        spec.family = fam;
        spec.n = n;
    } else {
        spec = default_surface(fam, n);
    }
    for (auto it = s["params"].begin(); it != s["params"].end(); ++it) {
        if (!it->is_number()) bad("surface.params." + it.key() + " must be a number");
        spec.params[it.key()] = it->get<double>();
    }
    spec.curve = get<std::string>(s, "curve", "surface.");
    if (!s["terms"].empty()) {
        spec.terms.clear();
        for (const auto& t : s["terms"]) {
            GraphTerm g;
            g.coef = get<double>(t, "coef", "surface.terms[].");
            g.exponents = get<std::vector<int>>(t, "exponents", "surface.terms[].");
            spec.terms.push_back(g);
        }
    }
    spec.table.counts = get<std::vector<int>>(s["table"], "counts", "surface.table.");
    spec.table.points = get<std::vector<std::vector<double>>>(s["table"], "points", "surface.table.");
    spec.orient_point = get<std::vector<double>>(s, "orient_point", "surface.");
    const Json& d = s["domain"];
    const auto lo = get<std::vector<double>>(d, "lo", "surface.domain.");
    if (!lo.empty()) {
        spec.domain.lo = lo;
        spec.domain.hi = get<std::vector<double>>(d, "hi", "surface.domain.");
        spec.domain.periodic = get<std::vector<bool>>(d, "periodic", "surface.domain.");
        if (spec.domain.hi.size() != lo.size() || spec.domain.periodic.size() != lo.size())
            bad("surface.domain lo, hi and periodic must have equal lengths");
    }
    return spec;
}

} // namespace

double RunConfig::tolerance(const std::string& name) const {
    const auto it = tol.find(name);
    if (it == tol.end()) throw Error(ErrorKind::usage, "no tolerance named '" + name + "'");
    return it->second;
}

Json default_config() {
    return {
        {"n", 3},
        {"surface",
         {{"family", "torus"},
          {"params", Json::object()},
          {"curve", "helix"},
          {"terms", Json::array()},
          {"table", {{"counts", Json::array()}, {"points", Json::array()}}},
          {"orient_point", Json::array()},
          {"domain", {{"lo", Json::array()}, {"hi", Json::array()}, {"periodic", Json::array()}}}}},
        {"grid", Json::array()},
        {"fd", {{"mode", "automatic"}, {"h_rel", 1e-4}, {"h3_rel", 1e-3}, {"richardson", true}}},
        {"tolerances", tolerance_defaults()},
        {"gauges", Json::array()},
        {"seed", 20261016},
        {"outputs", {"report", "table", "obj"}},
        {"faults", {{"corrupt_omega_nn", false}}},
        {"screen", {{"rotation", 0.2}, {"samples", 9}}},
        {"out", "out"},
    };
}

Json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot read config file " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        bad("config file " + path + " is not valid JSON: " + e.what());
    }
}

void merge_config(Json& base, const Json& patch) {
    if (!patch.is_object() || !base.is_object()) {
        base = patch;
        return;
    }
    for (auto it = patch.begin(); it != patch.end(); ++it) {
        if (base.contains(it.key()) && base[it.key()].is_object() && it->is_object())
            merge_config(base[it.key()], *it);
        else
            base[it.key()] = *it;
    }
}

void apply_override(Json& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) bad("override must look like path.to.key=value: " + assignment);
    const std::string path = assignment.substr(0, eq), text = assignment.substr(eq + 1);
    Json value = Json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;

    Json* node = &cfg;
    std::stringstream ss(path);
    std::string part, walked;
    std::vector<std::string> parts;
    while (std::getline(ss, part, '.')) parts.push_back(part);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        walked += (i ? "." : "") + parts[i];
        if (!node->is_object()) bad("config path '" + walked + "' is not an object");
        // surface.params accepts new names; everything else must exist already.
        const bool open = walked.rfind("surface.params.", 0) == 0;
        if (!node->contains(parts[i]) && !open) bad("unknown config path '" + walked + "'");
        node = &(*node)[parts[i]];
    }
    *node = value;
}

RunConfig parse_config(const Json& cfg) {
    const Json defaults = default_config();
    check_keys(cfg, defaults, "");
    Json full = defaults;
    merge_config(full, cfg);
    check_keys(full["surface"], defaults["surface"], "surface.");
    check_keys(full["fd"], defaults["fd"], "fd.");
    check_keys(full["tolerances"], defaults["tolerances"], "tolerances.");
    check_keys(full["faults"], defaults["faults"], "faults.");
    check_keys(full["screen"], defaults["screen"], "screen.");

    RunConfig rc;
    rc.n = get<int>(full, "n", "");
    if (rc.n != 3 && rc.n != 4) bad("n must be 3 or 4");
    rc.surface = parse_surface(full["surface"], rc.n);

    rc.grid = get<std::vector<int>>(full, "grid", "");
    if (rc.grid.empty()) rc.grid.assign(static_cast<std::size_t>(rc.n - 1), rc.n == 3 ? 32 : 12);
    if (static_cast<int>(rc.grid.size()) != rc.n - 1) bad("grid needs n-1 entries");
    for (int g : rc.grid)
        if (g < 8) bad("grid must have at least 8 samples per axis, got " + std::to_string(g));

    const Json& fd = full["fd"];
    rc.jets.mode = jet_mode(get<std::string>(fd, "mode", "fd."));
    rc.jets.fd.h_rel = get<double>(fd, "h_rel", "fd.");
    rc.jets.fd.h3_rel = get<double>(fd, "h3_rel", "fd.");
    rc.jets.fd.richardson = get<bool>(fd, "richardson", "fd.");
    if (!(rc.jets.fd.h_rel > 0.0) || !(rc.jets.fd.h3_rel > 0.0)) bad("fd steps must be positive");

    for (auto it = full["tolerances"].begin(); it != full["tolerances"].end(); ++it) {
        if (!it->is_number()) bad("tolerances." + it.key() + " must be a number");
        const double v = it->get<double>();
        if (!(v > 0.0)) bad("tolerances." + it.key() + " must be positive");
        rc.tol[it.key()] = v;
    }

    rc.gauges = get<std::vector<double>>(full, "gauges", "");
    rc.seed = get<std::uint64_t>(full, "seed", "");
    rc.outputs = get<std::vector<std::string>>(full, "outputs", "");
    for (const auto& o : rc.outputs)
        if (o != "report" && o != "table" && o != "obj") bad("unknown output '" + o + "'");
    rc.corrupt_omega_nn = get<bool>(full["faults"], "corrupt_omega_nn", "faults.");
    rc.screen_rotation = get<double>(full["screen"], "rotation", "screen.");
    rc.screen_samples = get<int>(full["screen"], "samples", "screen.");
    if (rc.screen_samples < 0) bad("screen.samples must be nonnegative");
    rc.out_dir = get<std::string>(full, "out", "");
    return rc;
}

std::vector<double> resolved_gauges(const RunConfig& cfg) {
    if (!cfg.gauges.empty()) return cfg.gauges;
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    std::vector<double> g(10);
    for (double& s : g) s = dist(rng);
    return g;
}

} // namespace lightlike
