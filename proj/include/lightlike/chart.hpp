#pragma once

// Parametrized hypersurfaces of R^n (n = 3 or 4) used as input to the lift.

#include "lightlike/lorentz.hpp"
#include "lightlike/taylor.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace lightlike {

enum class SurfaceFamily { sphere, ellipsoid, torus, tube_around_curve, graph, table_samples };

const char* to_string(SurfaceFamily f);
SurfaceFamily family_from_string(const std::string& name);

/// Rectangular parameter box; periodic axes wrap.
struct ParamBox {
    std::vector<double> lo;
    std::vector<double> hi;
    std::vector<bool> periodic;

    int dim() const noexcept { return static_cast<int>(lo.size()); }
    double extent(int k) const { return hi[static_cast<std::size_t>(k)] - lo[static_cast<std::size_t>(k)]; }
    double max_extent() const;
    /// True if u lies inside with `margin[k]` clearance on every non-periodic axis.
    bool interior(const Vec& u, const Vec& margin) const;
};

/// One term coef * prod u_k^{exponents[k]} of a graph height function.
struct GraphTerm {
    double coef = 0.0;
    std::vector<int> exponents;
};

/// Regular table of surface points, row-major over the parameter axes
/// (last axis fastest).
struct SampleTable {
    std::vector<int> counts;           // nodes per axis
    std::vector<std::vector<double>> points;
};

struct SurfaceSpec {
    SurfaceFamily family = SurfaceFamily::torus;
    int n = 3;
    std::map<std::string, double> params;
    std::string curve = "helix";       // tube_around_curve
    std::vector<GraphTerm> terms;      // graph
    SampleTable table;                 // table_samples
    std::vector<double> orient_point;  // table_samples: normals point toward this point if given
    ParamBox domain;                   // empty lo => family default
};

/// The family defaults used by `--surface NAME`.
SurfaceSpec default_surface(SurfaceFamily family, int n = 3);

class SurfaceChart {
public:
    virtual ~SurfaceChart() = default;

    virtual SurfaceFamily family() const = 0;
    int ambient_dim() const noexcept { return n_; }
    int param_dim() const noexcept { return n_ - 1; }
    const ParamBox& domain() const noexcept { return domain_; }

    /// Builtin families expand exactly; table charts only support point evaluation.
    virtual bool has_closed_form() const { return true; }

    /// r(u).
    virtual Vec point(const Vec& u) const;

    /// Taylor expansion of each coordinate of r about u (third order).
    virtual std::vector<Taylor> expand(const Vec& u) const = 0;

    /// A vector d with m . d > 0 for the preferred unit normal m at r(u).
    virtual Vec orientation_reference(const Vec& u, const Vec& r) const = 0;

    /// Nominal inverse length scale of the surface.
    virtual double curvature_scale() const = 0;

protected:
    SurfaceChart(int n, ParamBox domain) : n_(n), domain_(std::move(domain)) {}

private:
    int n_;
    ParamBox domain_;
};

/// Builds a chart; throws Error(config) for unknown or inconsistent specs.
std::unique_ptr<SurfaceChart> make_chart(const SurfaceSpec& spec);

/// Samples `chart` on a regular grid (row-major, cell centers) into a table spec.
SurfaceSpec tabulate(const SurfaceChart& chart, const std::vector<int>& counts);

} // namespace lightlike
