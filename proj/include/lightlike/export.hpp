#pragma once

// Focal samples as a columnar text table and, for n = 3, OBJ geometry of the
// curvature-sphere centers of each branch.

#include "lightlike/pipeline.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lightlike {

struct TableRow {
    std::vector<double> u;
    int branch = 0;
    double root = 0.0;
    int multiplicity = 1;
    std::string cls;
    std::vector<double> focus;  // n+2 normalized homogeneous coordinates
    std::string causal;         // "none" for point focal sets
};

std::vector<TableRow> table_rows(const ClassificationReport& rep);

/// Whitespace separated, one row per focal sample, reals with 17 significant digits.
void write_table(const std::vector<TableRow>& rows, int n, const std::string& path);
std::vector<TableRow> read_table(const std::string& path);

/// Euclidean center of the curvature sphere of a focus, if it is not a plane.
std::optional<Vec> sphere_center(const std::vector<double>& focus);

struct ObjSummary {
    std::string path;
    int branch = 0;
    int vertices = 0;
    std::string element;  // "p", "l" or "f"
    bool closed = false;  // polyline returns to its first vertex without breaks
};

/// One file per branch in `dir` (n = 3 only): a point for focal dimension 0,
/// a polyline along the parameter axis with the largest motion for
/// dimension 1, a quad mesh over the grid for dimension 2.
std::vector<ObjSummary> write_obj(const ClassificationReport& rep, const std::string& dir);

} // namespace lightlike
