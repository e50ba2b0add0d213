#pragma once

// End-to-end classification over a parameter grid and its JSON report.

#include "lightlike/config.hpp"
#include "lightlike/error.hpp"
#include "lightlike/normalization.hpp"
#include "lightlike/singular.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace lightlike {

/// Worker count: hardware concurrency, capped by LIGHTLIKE_WORKERS when set.
int worker_count();

/// Runs fn(i) for i in [0, count) on worker_count() threads. Results must be
/// written to per-index slots; the first exception (lowest index) is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

struct PointFocus {
    int branch = -1;
    FocusRecord record;
    FocalRank rank;
};

struct PointRecord {
    std::size_t index = 0;
    Vec u;
    Vec roots;
    bool grouping_ambiguous = false;
    std::vector<PointFocus> foci;
    double lambda_bar = 0.0;
    bool normalization_defined = false;
    bool nu_defined = true;
    double frame_rcond = 0.0;
    double pfaffian = 0.0;
    double duality = 0.0;
    double coframe = 0.0;
    double apolarity = 0.0;
    double vieta = 0.0;
    double symmetry_defect = 0.0;
    double mean_residual = 0.0;
};

struct StageFailure {
    std::size_t index = 0;
    Vec u;
    std::string stage;
    ErrorKind kind = ErrorKind::geometry;
    std::string message;
};

struct ClassificationReport {
    RunConfig config;
    std::unique_ptr<SurfaceChart> chart;
    std::unique_ptr<ChartFrameField> field;
    ParamGrid grid;
    double scale = 0.0;            // max |root| over the grid, floored by the chart scale
    std::vector<GeneratorData> data;
    std::vector<PointRecord> points;
    FocalResult focal;
    DegeneracyReport degeneracy;
    std::vector<StageFailure> failures;

    bool complete() const { return failures.empty(); }
    /// Exit code for the first failure, 0 when complete.
    int exit_code() const;
};

SingularOptions singular_options(const RunConfig& cfg, double scale);

/// sample -> lift -> frames -> metric pairs -> foci -> classes -> focal
/// manifolds -> normalization. Per-point errors are collected as failures
/// with stage names; stages after a failed one are skipped.
/// Throws Error(config) for an unusable configuration.
ClassificationReport run_classify(const RunConfig& cfg);

Json report_to_json(const ClassificationReport& rep);

/// Homogeneous focus coordinates as written to reports.
std::vector<double> focus_coordinates(const FocusRecord& rec);

/// Writes `j` with a trailing newline; Error(io) on failure.
void write_json(const Json& j, const std::string& path);

} // namespace lightlike
