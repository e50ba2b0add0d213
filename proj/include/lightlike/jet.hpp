#pragma once

#include "lightlike/chart.hpp"

#include <vector>

namespace lightlike {

enum class JetMode { automatic, closed_form, finite_difference };

/// Finite-difference steps, relative to the extent of each parameter axis.
struct FdSteps {
    double h_rel = 1e-4;   // first and second partials
    double h3_rel = 1e-3;  // third partials
    bool richardson = true;
};

struct JetOptions {
    JetMode mode = JetMode::automatic;
    FdSteps fd;
};

/// Derivative data of a chart at one parameter point.
///
/// Position and unit normal are stored as third-order Taylor expansions about
/// u; the normal expansion is exact through second order only.
class Jet {
public:
    Jet(Vec u, std::vector<Taylor> r_series, std::vector<Taylor> m_series, bool closed_form);

    const Vec& u() const noexcept { return u_; }
    int ambient_dim() const noexcept { return static_cast<int>(r_.size()); }
    int param_dim() const noexcept { return static_cast<int>(u_.size()); }
    bool closed_form() const noexcept { return closed_form_; }

    Vec r() const;
    Vec dr(int i) const;
    Vec d2r(int i, int j) const;
    Vec d3r(int i, int j, int k) const;
    Vec m() const;
    Vec dm(int i) const;
    Vec d2m(int i, int j) const;

    /// g_ij = r_i . r_j
    Mat first_form() const;
    /// h_ij = r_ij . m
    Mat second_form() const;

    const std::vector<Taylor>& r_series() const noexcept { return r_; }
    const std::vector<Taylor>& m_series() const noexcept { return m_; }

private:
    Vec component(const std::vector<Taylor>& s, Taylor::Exponent alpha) const;

    Vec u_;
    std::vector<Taylor> r_;
    std::vector<Taylor> m_;
    bool closed_form_;
};

/// Jet of `chart` at u through `order` (1..3). Closed-form expansion is used
/// when the chart provides it (unless mode forces finite differences); the
/// finite-difference path uses central stencils with one Richardson level.
/// Throws Error(domain) when u lacks the stencil margin on a bounded axis and
/// Error(geometry) when the tangent vectors are dependent.
Jet compute_jet(const SurfaceChart& chart, const Vec& u, int order = 3, const JetOptions& opts = {});

/// Absolute FD steps for the chart: (h per axis, h3 per axis).
std::pair<Vec, Vec> fd_steps(const SurfaceChart& chart, const FdSteps& fd);

/// Regular grid of cell centers over the chart domain, row-major.
struct ParamGrid {
    std::vector<int> counts;
    ParamBox box;

    std::size_t size() const;
    Vec point(std::size_t flat) const;
    std::vector<int> index(std::size_t flat) const;
    std::size_t flat(const std::vector<int>& index) const;
    /// Distance, in cells, to the nearest bounded edge of the index box.
    int ring(std::size_t flat) const;
};

/// Jets at every grid point; throws Error(usage) for grids coarser than 8 per
/// axis and Error(geometry) naming the parameter value at a non-immersed point.
std::vector<Jet> sample_chart(const SurfaceChart& chart, const ParamGrid& grid, const JetOptions& opts = {});

} // namespace lightlike
