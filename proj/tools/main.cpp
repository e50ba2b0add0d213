// lightlike: classify, export and verify the focal sets of a lightlike hypersurface.

#include "lightlike/export.hpp"
#include "lightlike/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace lightlike;

namespace {

struct Common {
    std::string config_path, surface, grid, out, gauges;
    std::vector<std::string> sets;
    std::int64_t seed = -1;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config_path, "JSON config file");
    sub->add_option("--surface", c.surface, "surface family");
    sub->add_option("--grid", c.grid, "grid as AxB or AxBxC");
    sub->add_option("--out", c.out, "output directory");
    sub->add_option("--gauge-shifts", c.gauges, "comma separated gauge shifts");
    sub->add_option("--seed", c.seed, "seed for drawn gauge shifts");
    sub->add_option("--set", c.sets, "override, path.to.key=value")->take_all();
}

std::vector<double> split_numbers(const std::string& s, char sep, const char* what) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const std::size_t next = std::min(s.find(sep, pos), s.size());
        const std::string tok = s.substr(pos, next - pos);
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (tok.empty() || *end != '\0') throw Error(ErrorKind::config, std::string("cannot parse ") + what + ": " + s);
        out.push_back(v);
        pos = next + 1;
    }
    return out;
}

RunConfig build_config(const Common& c) {
    Json j = c.config_path.empty() ? Json::object() : load_config_file(c.config_path);
    Json full = default_config();
    merge_config(full, j);
    if (!c.surface.empty()) {
        // a new family starts from its own default parameters
        full["surface"]["family"] = c.surface;
        full["surface"]["params"] = Json::object();
    }
    if (!c.grid.empty()) {
        Json g = Json::array();
        for (double v : split_numbers(c.grid, 'x', "--grid")) g.push_back(static_cast<int>(v));
        full["grid"] = g;
    }
    if (!c.gauges.empty()) full["gauges"] = split_numbers(c.gauges, ',', "--gauge-shifts");
    if (c.seed >= 0) full["seed"] = c.seed;
    if (!c.out.empty()) full["out"] = c.out;
    for (const auto& s : c.sets) apply_override(full, s);
    return parse_config(full);
}

void prepare(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::io, "cannot create " + dir + ": " + ec.message());
}

void print_failures(const ClassificationReport& rep) {
    for (const auto& f : rep.failures)
        std::cerr << "stage " << f.stage << " failed (" << to_string(f.kind) << "): " << f.message << "\n";
}

bool wants(const RunConfig& cfg, const char* o) {
    return std::find(cfg.outputs.begin(), cfg.outputs.end(), o) != cfg.outputs.end();
}

int classify(const Common& c) {
    const RunConfig cfg = build_config(c);
    prepare(cfg.out_dir);
    const ClassificationReport rep = run_classify(cfg);
    write_json(report_to_json(rep), cfg.out_dir + "/report.json");
    print_failures(rep);
    if (rep.complete())
        for (const auto& b : rep.focal.branches)
            std::cout << "branch " << b.branch << ": " << to_string(b.cls) << ", dimension " << b.est_dim << "\n";
    return rep.exit_code();
}

int do_export(const Common& c) {
    const RunConfig cfg = build_config(c);
    prepare(cfg.out_dir);
    const ClassificationReport rep = run_classify(cfg);
    if (wants(cfg, "report")) write_json(report_to_json(rep), cfg.out_dir + "/report.json");
    if (!rep.complete()) {
        print_failures(rep);
        return rep.exit_code();
    }
    if (wants(cfg, "table")) {
        const std::string path = cfg.out_dir + "/focal_table.txt";
        write_table(table_rows(rep), cfg.n, path);
        std::cout << "wrote " << path << "\n";
    }
    if (wants(cfg, "obj")) {
        if (cfg.n != 3) std::cerr << "obj output is only produced for n = 3\n";
        for (const auto& s : write_obj(rep, cfg.out_dir))
            std::cout << "wrote " << s.path << " (" << s.vertices << " vertices)\n";
    }
    return kExitOk;
}

int verify(const Common& c) {
    const RunConfig cfg = build_config(c);
    prepare(cfg.out_dir);
    const ClassificationReport rep = run_classify(cfg);
    const VerifyResult v = run_verify(rep);
    write_json(verify_to_json(v, rep), cfg.out_dir + "/verify.json");
    print_failures(rep);
    for (const auto& ch : v.checks) {
        std::printf("%-8s %-36s value=%-12.4g tol=%-10.3g %s\n", to_string(ch.status), ch.name.c_str(), ch.value,
                    ch.tolerance, ch.detail.c_str());
    }
    return v.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Foci of lightlike hypersurfaces of de Sitter space induced by hypersurfaces of conformal space"};
    app.require_subcommand(1);
    Common c;
    CLI::App* cl = app.add_subcommand("classify", "compute and classify focal sets, write report.json");
    CLI::App* ex = app.add_subcommand("export", "write the focal table and OBJ geometry");
    CLI::App* ve = app.add_subcommand("verify", "run the invariant suite, write verify.json");
    for (auto* s : {cl, ex, ve}) add_common(s, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitValidation;
    }

    try {
        if (cl->parsed()) return classify(c);
        if (ex->parsed()) return do_export(c);
        return verify(c);
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}
