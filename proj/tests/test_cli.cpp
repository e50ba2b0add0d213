#include "lightlike/export.hpp"
#include "lightlike/verify.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace lightlike;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("lightlike_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

RunConfig config_with(std::initializer_list<std::string> sets) {
    Json j = default_config();
    for (const auto& s : sets) apply_override(j, s);
    return parse_config(j);
}

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::usage;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<Vec> obj_vertices(const fs::path& p) {
    std::ifstream in(p);
    std::vector<Vec> out;
    for (std::string line; std::getline(in, line);) {
        if (line.rfind("v ", 0) != 0) continue;
        std::istringstream ls(line.substr(2));
        Vec v(3);
        ls >> v(0) >> v(1) >> v(2);
        out.push_back(v);
    }
    return out;
}

} // namespace

TEST(Config, DefaultsParse) {
    const RunConfig cfg = parse_config(default_config());
    EXPECT_EQ(cfg.n, 3);
    EXPECT_EQ(cfg.grid, (std::vector<int>{32, 32}));
    EXPECT_EQ(cfg.surface.family, SurfaceFamily::torus);
    EXPECT_DOUBLE_EQ(cfg.tolerance("pfaffian"), 1e-8);
}

TEST(Config, RejectsInvalidValues) {
    EXPECT_EQ(kind_of([] { config_with({"grid=[2,2]"}); }), ErrorKind::config);
    EXPECT_EQ(kind_of([] { config_with({"n=5"}); }), ErrorKind::config);
    EXPECT_EQ(kind_of([] { config_with({"tolerances.pfaffian=-1"}); }), ErrorKind::config);
    EXPECT_EQ(kind_of([] { config_with({"surface.family=\"klein\""}); }), ErrorKind::config);
    EXPECT_EQ(kind_of([] { parse_config(Json{{"colour", 1}}); }), ErrorKind::config);
    EXPECT_EQ(kind_of([] { parse_config(Json{{"tolerances", {{"made_up", 1.0}}}}); }), ErrorKind::config);
}

TEST(Config, OverridesReachNestedKeys) {
    const RunConfig cfg = config_with({"tolerances.pfaffian=1e-6", "surface.params.R=3", "fd.mode=closed_form"});
    EXPECT_DOUBLE_EQ(cfg.tolerance("pfaffian"), 1e-6);
    EXPECT_DOUBLE_EQ(cfg.surface.params.at("R"), 3.0);
    EXPECT_EQ(cfg.jets.mode, JetMode::closed_form);
    Json j = default_config();
    EXPECT_EQ(kind_of([&] { apply_override(j, "fd.nope=1"); }), ErrorKind::config);
    EXPECT_EQ(kind_of([&] { apply_override(j, "no_equals_sign"); }), ErrorKind::config);
}

TEST(Config, DrawnGaugesAreSeededAndBounded) {
    const RunConfig a = config_with({"seed=7"}), b = config_with({"seed=7"}), c = config_with({"seed=8"});
    const auto ga = resolved_gauges(a);
    ASSERT_EQ(ga.size(), 10u);
    EXPECT_EQ(ga, resolved_gauges(b));
    EXPECT_NE(ga, resolved_gauges(c));
    for (double s : ga) {
        EXPECT_GE(s, -5.0);
        EXPECT_LE(s, 5.0);
    }
    EXPECT_EQ(resolved_gauges(config_with({"gauges=[0.5]"})), std::vector<double>{0.5});
}

TEST(Export, TableRoundTripIsBitwise) {
    const ClassificationReport rep = run_classify(config_with({"grid=[12,12]"}));
    ASSERT_TRUE(rep.complete());
    const auto rows = table_rows(rep);
    ASSERT_EQ(rows.size(), 2u * 144u);
    const fs::path p = scratch_dir("table") / "t.txt";
    write_table(rows, 3, p.string());
    const auto back = read_table(p.string());
    ASSERT_EQ(back.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(back[i].branch, rows[i].branch);
        EXPECT_EQ(back[i].cls, rows[i].cls);
        EXPECT_EQ(back[i].causal, rows[i].causal);
        EXPECT_EQ(back[i].multiplicity, rows[i].multiplicity);
        EXPECT_EQ(std::memcmp(&back[i].root, &rows[i].root, sizeof(double)), 0);
        ASSERT_EQ(back[i].focus.size(), rows[i].focus.size());
        EXPECT_EQ(std::memcmp(back[i].focus.data(), rows[i].focus.data(), sizeof(double) * rows[i].focus.size()), 0);
        EXPECT_EQ(std::memcmp(back[i].u.data(), rows[i].u.data(), sizeof(double) * rows[i].u.size()), 0);
    }
}

TEST(Export, TorusCoreCircleIsClosedPolyline) {
    const ClassificationReport rep = run_classify(config_with({}));
    ASSERT_TRUE(rep.complete());
    const fs::path dir = scratch_dir("torus_obj");
    const auto objs = write_obj(rep, dir.string());
    ASSERT_EQ(objs.size(), 2u);
    // one family of curvature spheres is centered on the core circle of radius R = 2
    int on_core = 0;
    for (const auto& o : objs) {
        EXPECT_EQ(o.element, "l");
        const auto verts = obj_vertices(o.path);
        bool all_on_core = !verts.empty();
        for (const auto& v : verts)
            all_on_core = all_on_core && std::abs(std::hypot(v(0), v(1)) - 2.0) < 1e-9 && std::abs(v(2)) < 1e-9;
        if (all_on_core) {
            ++on_core;
            EXPECT_TRUE(o.closed);
            EXPECT_EQ(o.vertices, 32);
        }
    }
    EXPECT_EQ(on_core, 1);
}

TEST(Export, SphereFocalSetIsItsCenter) {
    const ClassificationReport rep = run_classify(config_with({"surface.family=\"sphere\""}));
    ASSERT_TRUE(rep.complete());
    const auto objs = write_obj(rep, scratch_dir("sphere_obj").string());
    ASSERT_EQ(objs.size(), 1u);
    EXPECT_EQ(objs[0].element, "p");
    const auto verts = obj_vertices(objs[0].path);
    ASSERT_EQ(verts.size(), 1u);
    EXPECT_LT(verts[0].norm(), 1e-9);
}

TEST(Verify, CleanTorusPasses) {
    const ClassificationReport rep = run_classify(config_with({"grid=[16,16]"}));
    const VerifyResult v = run_verify(rep);
    EXPECT_EQ(v.exit_code, kExitOk);
    for (const auto& c : v.checks) EXPECT_NE(c.status, CheckStatus::fail) << c.name << ": " << c.detail;
}

TEST(Verify, CorruptedConnectionIsReported) {
    const ClassificationReport rep = run_classify(config_with({"grid=[16,16]", "faults.corrupt_omega_nn=true"}));
    const VerifyResult v = run_verify(rep);
    EXPECT_EQ(v.exit_code, kExitCheckFailure);
    const CheckResult* c = v.find("cartan.pfaffian");
    ASSERT_NE(c, nullptr);
    EXPECT_EQ(c->status, CheckStatus::fail);
    EXPECT_NE(c->detail.find("omega_n^n"), std::string::npos) << c->detail;
}

TEST(Verify, ZeroGaugeSkipsGaugeSuites) {
    const ClassificationReport rep = run_classify(config_with({"grid=[12,12]", "gauges=[0]"}));
    const VerifyResult v = run_verify(rep);
    for (const char* name : {"cartan.gauge_covariance", "singular.gauge_invariance", "normalization.gauge_invariance"}) {
        const CheckResult* c = v.find(name);
        ASSERT_NE(c, nullptr) << name;
        EXPECT_EQ(c->status, CheckStatus::skipped) << name;
    }
    EXPECT_EQ(v.exit_code, kExitOk);
}

TEST(Verify, OutputIsDeterministic) {
    const RunConfig cfg = config_with({"grid=[12,12]"});
    const fs::path dir = scratch_dir("determinism");
    for (int k = 0; k < 2; ++k) {
        const ClassificationReport rep = run_classify(cfg);
        write_json(verify_to_json(run_verify(rep), rep), (dir / ("v" + std::to_string(k) + ".json")).string());
        write_json(report_to_json(rep), (dir / ("r" + std::to_string(k) + ".json")).string());
    }
    EXPECT_EQ(slurp(dir / "v0.json"), slurp(dir / "v1.json"));
    EXPECT_EQ(slurp(dir / "r0.json"), slurp(dir / "r1.json"));
}

TEST(Pipeline, UndefinedNormalizationIsRecordedNotFatal) {
    // the sphere's normalization is undefined everywhere, which is recorded, not fatal
    const ClassificationReport rep = run_classify(config_with({"surface.family=\"sphere\"", "grid=[8,8]"}));
    EXPECT_TRUE(rep.complete());
    for (const auto& p : rep.points) EXPECT_FALSE(p.normalization_defined);
}

TEST(Config, PublishedSchemaCoversDefaults) {
    std::ifstream in(std::string(LIGHTLIKE_SOURCE_DIR) + "/docs/config.schema.json");
    ASSERT_TRUE(in) << "schema missing";
    const Json schema = Json::parse(in);
    const Json defaults = default_config();
    for (auto it = defaults.begin(); it != defaults.end(); ++it) {
        ASSERT_TRUE(schema["properties"].contains(it.key())) << it.key();
        if (!it->is_object()) continue;
        const Json& props = schema["properties"][it.key()]["properties"];
        for (auto jt = it->begin(); jt != it->end(); ++jt) EXPECT_TRUE(props.contains(jt.key())) << it.key() << "." << jt.key();
    }
}
