#pragma once

// Run configuration: JSON text with defaults, dotted-path overrides and validation.

#include "lightlike/chart.hpp"
#include "lightlike/jet.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace lightlike {

using Json = nlohmann::json;

struct RunConfig {
    int n = 3;
    SurfaceSpec surface;
    std::vector<int> grid;                 // samples per parameter axis
    JetOptions jets;
    std::map<std::string, double> tol;     // named tolerances, see default_config()
    std::vector<double> gauges;            // shift values for invariance suites
    std::uint64_t seed = 0;
    std::vector<std::string> outputs;      // "report", "table", "obj"
    bool corrupt_omega_nn = false;         // fault injection for the Pfaffian check
    double screen_rotation = 0.0;          // synthetic twist of the verified screen
    int screen_samples = 0;
    std::string out_dir = "out";

    double tolerance(const std::string& name) const;
};

/// Full default configuration, every key present.
Json default_config();

/// Parses a config file; Error(io) if unreadable, Error(config) if not JSON.
Json load_config_file(const std::string& path);

/// Recursively overlays `patch` on `base`. Objects merge, everything else replaces.
void merge_config(Json& base, const Json& patch);

/// Applies "dotted.path=value". The value is parsed as JSON when possible,
/// otherwise taken as a string. Unknown paths are Error(config).
void apply_override(Json& cfg, const std::string& assignment);

/// Validates and converts. Unknown keys, grids under 8 per axis, nonpositive
/// tolerances and n outside {3, 4} are Error(config).
RunConfig parse_config(const Json& cfg);

/// Replaces an empty gauge list by 10 shifts drawn from [-5, 5] with the seed.
std::vector<double> resolved_gauges(const RunConfig& cfg);

} // namespace lightlike
