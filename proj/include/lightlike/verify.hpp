#pragma once

// Invariant suite over a classified grid, with per-check machine-readable results.

#include "lightlike/pipeline.hpp"

#include <array>
#include <string>
#include <vector>

namespace lightlike {

enum class CheckStatus { pass, fail, skipped };
const char* to_string(CheckStatus s);

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::pass;
    double value = 0.0;       // worst observed value
    double tolerance = 0.0;
    std::string detail;
};

struct VerifyResult {
    std::vector<CheckResult> checks;
    int exit_code = kExitOk;

    const CheckResult* find(const std::string& name) const;
};

/// Plaquette residuals of the structure equation and the four curvature lines
/// at sides h, h/2, h/4, with the two successive reduction ratios.
struct PlaquetteConvergence {
    std::vector<std::string> labels;
    std::vector<std::array<double, 3>> residuals;
    std::vector<std::array<double, 2>> ratios;

    /// A line is exact when all its residuals are below `floor`.
    bool exact(std::size_t i, double floor = 1e-11) const;
    /// Every line that is not exact has both ratios in [lo, hi].
    bool second_order(double lo, double hi, double floor = 1e-11) const;
};

PlaquetteConvergence plaquette_convergence(const FrameField& field, const Vec& x, const Vec& v, const Vec& w, double h);

/// Frame field whose screen is moved into the normalizing subspace, plus an
/// optional twist tau_1 += eps u_2, tau_2 -= eps u_1 that breaks integrability.
/// Evaluating it where the normalization is undefined throws Error(geometry).
ScreenFrameField invariant_screen(const ChartFrameField& base, double twist = 0.0, double gauge = 0.0,
                                  bool richardson = true);

/// Up to `count` grid points at least `ring` cells from bounded edges, evenly spread.
std::vector<std::size_t> interior_samples(const ParamGrid& grid, int count, int ring = 2);

VerifyResult run_verify(const ClassificationReport& rep);

Json verify_to_json(const VerifyResult& v, const ClassificationReport& rep);

} // namespace lightlike
