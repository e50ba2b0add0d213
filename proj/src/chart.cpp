#include "lightlike/chart.hpp"

#include "lightlike/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace lightlike {

namespace {

constexpr double kPi = std::numbers::pi;

double param(const SurfaceSpec& spec, const std::string& key, double fallback) {
    auto it = spec.params.find(key);
    return it == spec.params.end() ? fallback : it->second;
}

double positive_param(const SurfaceSpec& spec, const std::string& key, double fallback) {
    const double v = param(spec, key, fallback);
    if (!(v > 0.0) || !std::isfinite(v))
        throw Error(ErrorKind::config, "surface parameter '" + key + "' must be positive");
    return v;
}

std::vector<Taylor> expansion_variables(const Vec& u) {
    std::vector<Taylor> x;
    for (Eigen::Index k = 0; k < u.size(); ++k) x.push_back(Taylor::variable(static_cast<int>(k), u(k)));
    return x;
}

ParamBox angular_box(int n) {
    // polar angles away from the coordinate poles, last angle periodic
    ParamBox b;
    for (int k = 0; k < n - 2; ++k) {
        b.lo.push_back(0.3);
        b.hi.push_back(kPi - 0.3);
        b.periodic.push_back(false);
    }
    b.lo.push_back(0.0);
    b.hi.push_back(2.0 * kPi);
    b.periodic.push_back(true);
    return b;
}

// Unit sphere direction in R^n from n-1 hyperspherical angles.
std::vector<Taylor> sphere_direction(const std::vector<Taylor>& u, int n) {
    std::vector<Taylor> x(static_cast<std::size_t>(n));
    if (n == 3) {
        const Taylor st = sin(u[0]);
        x[0] = st * cos(u[1]);
        x[1] = st * sin(u[1]);
        x[2] = cos(u[0]);
    } else {
        const Taylor sc = sin(u[0]);
        const Taylor st = sin(u[1]);
        x[0] = cos(u[0]);
        x[1] = sc * cos(u[1]);
        x[2] = sc * st * cos(u[2]);
        x[3] = sc * st * sin(u[2]);
    }
    return x;
}

ParamBox resolve_domain(const SurfaceSpec& spec, ParamBox fallback) {
    if (spec.domain.lo.empty()) return fallback;
    ParamBox b = spec.domain;
    const int d = spec.n - 1;
    if (b.dim() != d || static_cast<int>(b.hi.size()) != d)
        throw Error(ErrorKind::config, "surface domain must have one interval per parameter axis");
    if (b.periodic.size() != static_cast<std::size_t>(d)) b.periodic.assign(static_cast<std::size_t>(d), false);
    for (int k = 0; k < d; ++k)
        if (!(b.extent(k) > 0.0)) throw Error(ErrorKind::config, "surface domain interval is empty");
    return b;
}

class SphereChart final : public SurfaceChart {
public:
    explicit SphereChart(const SurfaceSpec& spec)
        : SurfaceChart(spec.n, resolve_domain(spec, angular_box(spec.n))),
          rho_(positive_param(spec, "rho", 1.0)), center_(Vec::Zero(spec.n)) {
        const char* keys[] = {"cx", "cy", "cz", "cw"};
        for (int k = 0; k < spec.n; ++k) center_(k) = param(spec, keys[k], 0.0);
    }
    SurfaceFamily family() const override { return SurfaceFamily::sphere; }
    std::vector<Taylor> expand(const Vec& u) const override {
        auto x = sphere_direction(expansion_variables(u), ambient_dim());
        for (int k = 0; k < ambient_dim(); ++k) x[static_cast<std::size_t>(k)] = center_(k) + rho_ * x[static_cast<std::size_t>(k)];
        return x;
    }
    Vec orientation_reference(const Vec&, const Vec& r) const override { return center_ - r; }
    double curvature_scale() const override { return 1.0 / rho_; }

private:
    double rho_;
    Vec center_;
};

class EllipsoidChart final : public SurfaceChart {
public:
    explicit EllipsoidChart(const SurfaceSpec& spec)
        : SurfaceChart(spec.n, resolve_domain(spec, angular_box(spec.n))), axes_(spec.n) {
        const char* keys[] = {"a", "b", "c", "d"};
        const double defaults[] = {3.0, 2.0, 1.0, 1.5};
        for (int k = 0; k < spec.n; ++k) axes_(k) = positive_param(spec, keys[k], defaults[k]);
    }
    SurfaceFamily family() const override { return SurfaceFamily::ellipsoid; }
    std::vector<Taylor> expand(const Vec& u) const override {
        auto x = sphere_direction(expansion_variables(u), ambient_dim());
        for (int k = 0; k < ambient_dim(); ++k) x[static_cast<std::size_t>(k)] = axes_(k) * x[static_cast<std::size_t>(k)];
        return x;
    }
    Vec orientation_reference(const Vec&, const Vec& r) const override { return -r; }
    double curvature_scale() const override {
        return axes_.maxCoeff() / (axes_.minCoeff() * axes_.minCoeff());
    }

private:
    Vec axes_;
};

class TorusChart final : public SurfaceChart {
public:
    explicit TorusChart(const SurfaceSpec& spec)
        : SurfaceChart(3, resolve_domain(spec, periodic_box())),
          R_(positive_param(spec, "R", 2.0)), r0_(positive_param(spec, "r0", 1.0)) {
        if (spec.n != 3) throw Error(ErrorKind::config, "torus is only available for n = 3");
        if (!(r0_ < R_)) throw Error(ErrorKind::config, "torus requires r0 < R");
    }
    SurfaceFamily family() const override { return SurfaceFamily::torus; }
    std::vector<Taylor> expand(const Vec& u) const override {
        auto v = expansion_variables(u); // (theta around the tube, phi around the axis)
        const Taylor rad = R_ + r0_ * cos(v[0]);
        return {rad * cos(v[1]), rad * sin(v[1]), r0_ * sin(v[0])};
    }
    Vec orientation_reference(const Vec& u, const Vec& r) const override {
        Vec core(3);
        core << R_ * std::cos(u(1)), R_ * std::sin(u(1)), 0.0;
        return core - r;
    }
    double curvature_scale() const override { return 1.0 / r0_; }

private:
    static ParamBox periodic_box() { return ParamBox{{0.0, 0.0}, {2.0 * kPi, 2.0 * kPi}, {true, true}}; }
    double R_, r0_;
};

class TubeChart final : public SurfaceChart {
public:
    explicit TubeChart(const SurfaceSpec& spec)
        : SurfaceChart(3, resolve_domain(spec, default_box(spec.curve))), curve_(spec.curve),
          A_(param(spec, "A", 2.0)), B_(param(spec, "B", 1.0)), a_(positive_param(spec, "radius", 0.5)) {
        if (spec.n != 3) throw Error(ErrorKind::config, "tube_around_curve is only available for n = 3");
        if (curve_ == "circle") B_ = 0.0;
        if (curve_ == "helix" || curve_ == "circle") {
            if (!(A_ > 0.0)) throw Error(ErrorKind::config, "tube curve radius A must be positive");
            const double kappa = A_ / (A_ * A_ + B_ * B_);
            if (!(a_ * kappa < 1.0))
                throw Error(ErrorKind::config, "tube radius exceeds the curve's radius of curvature");
        } else if (curve_ != "line") {
            throw Error(ErrorKind::config, "unknown tube curve '" + curve_ + "' (helix, circle, line)");
        }
    }
    SurfaceFamily family() const override { return SurfaceFamily::tube_around_curve; }
    std::vector<Taylor> expand(const Vec& u) const override {
        auto v = expansion_variables(u); // (t along the curve, theta around it)
        const Taylor ct = cos(v[1]), st = sin(v[1]);
        if (curve_ == "line") return {a_ * ct, a_ * st, v[0]};
        const double c = std::sqrt(A_ * A_ + B_ * B_);
        const Taylor cs = cos(v[0]), sn = sin(v[0]);
        // helix gamma(t) = (A cos t, A sin t, B t), principal normal N, binormal Bn
        const Taylor g0 = A_ * cs, g1 = A_ * sn, g2 = B_ * v[0];
        const Taylor n0 = -cs, n1 = -sn;
        const Taylor b0 = (B_ / c) * sn, b1 = (-B_ / c) * cs;
        const double b2 = A_ / c;
        return {g0 + a_ * (ct * n0 + st * b0), g1 + a_ * (ct * n1 + st * b1), g2 + a_ * (st * b2)};
    }
    Vec orientation_reference(const Vec& u, const Vec& r) const override {
        Vec g(3);
        if (curve_ == "line") g << 0.0, 0.0, u(0);
        else g << A_ * std::cos(u(0)), A_ * std::sin(u(0)), B_ * u(0);
        return g - r;
    }
    double curvature_scale() const override { return 1.0 / a_; }

private:
    static ParamBox default_box(const std::string& curve) {
        const double t_hi = curve == "line" ? 2.0 : (curve == "circle" ? 2.0 * kPi : 4.0 * kPi);
        return ParamBox{{0.0, 0.0}, {t_hi, 2.0 * kPi}, {curve == "circle", true}};
    }
    std::string curve_;
    double A_, B_, a_;
};

class GraphChart final : public SurfaceChart {
public:
    explicit GraphChart(const SurfaceSpec& spec)
        : SurfaceChart(spec.n, resolve_domain(spec, cube(spec.n - 1))), terms_(spec.terms) {
        for (const auto& t : terms_)
            if (static_cast<int>(t.exponents.size()) != spec.n - 1)
                throw Error(ErrorKind::config, "graph term has wrong number of exponents");
        scale_ = 0.0;
        for (const auto& t : terms_) scale_ = std::max(scale_, std::abs(t.coef));
        if (scale_ == 0.0) scale_ = 1.0;
    }
    SurfaceFamily family() const override { return SurfaceFamily::graph; }
    std::vector<Taylor> expand(const Vec& u) const override {
        auto v = expansion_variables(u);
        Taylor f(0.0);
        for (const auto& t : terms_) {
            Taylor mono(t.coef);
            for (std::size_t k = 0; k < v.size(); ++k)
                for (int e = 0; e < t.exponents[k]; ++e) mono *= v[k];
            f += mono;
        }
        v.push_back(f);
        return v;
    }
    Vec orientation_reference(const Vec&, const Vec&) const override {
        return Vec::Unit(ambient_dim(), ambient_dim() - 1);
    }
    double curvature_scale() const override { return scale_; }

private:
    static ParamBox cube(int d) {
        return ParamBox{std::vector<double>(static_cast<std::size_t>(d), -1.0),
                        std::vector<double>(static_cast<std::size_t>(d), 1.0),
                        std::vector<bool>(static_cast<std::size_t>(d), false)};
    }
    std::vector<GraphTerm> terms_;
    double scale_;
};

// Piecewise degree-5 tensor Lagrange interpolation of tabulated points.
class TableChart final : public SurfaceChart {
public:
    explicit TableChart(const SurfaceSpec& spec)
        : SurfaceChart(spec.n, check_box(spec)), table_(spec.table) {
        const int d = spec.n - 1;
        if (static_cast<int>(table_.counts.size()) != d)
            throw Error(ErrorKind::config, "table_samples: counts must have one entry per axis");
        std::size_t total = 1;
        for (int c : table_.counts) {
            if (c < 6) throw Error(ErrorKind::config, "table_samples: need at least 6 nodes per axis");
            total *= static_cast<std::size_t>(c);
        }
        if (table_.points.size() != total)
            throw Error(ErrorKind::config, "table_samples: point count does not match node counts");
        for (const auto& p : table_.points)
            if (static_cast<int>(p.size()) != spec.n)
                throw Error(ErrorKind::config, "table_samples: point has wrong dimension");
        if (!spec.orient_point.empty()) {
            if (static_cast<int>(spec.orient_point.size()) != spec.n)
                throw Error(ErrorKind::config, "table_samples: orient_point has wrong dimension");
            orient_ = Eigen::Map<const Vec>(spec.orient_point.data(), spec.n);
        }
        scale_ = param(spec, "curvature_scale", 1.0);
    }
    SurfaceFamily family() const override { return SurfaceFamily::table_samples; }
    bool has_closed_form() const override { return false; }
    std::vector<Taylor> expand(const Vec&) const override {
        throw Error(ErrorKind::usage, "table_samples charts have no closed-form expansion");
    }
    Vec point(const Vec& u) const override {
        const int d = param_dim();
        std::vector<int> start(static_cast<std::size_t>(d));
        std::vector<std::array<double, 6>> w(static_cast<std::size_t>(d));
        for (int k = 0; k < d; ++k) {
            const int cnt = table_.counts[static_cast<std::size_t>(k)];
            const double step = domain().extent(k) / (cnt - 1);
            const double x = (u(k) - domain().lo[static_cast<std::size_t>(k)]) / step;
            int cell = static_cast<int>(std::floor(x));
            int s = std::clamp(cell - 2, 0, cnt - 6);
            start[static_cast<std::size_t>(k)] = s;
            for (int a = 0; a < 6; ++a) {
                double l = 1.0;
                for (int b = 0; b < 6; ++b)
                    if (b != a) l *= (x - (s + b)) / static_cast<double>(a - b);
                w[static_cast<std::size_t>(k)][static_cast<std::size_t>(a)] = l;
            }
        }
        Vec r = Vec::Zero(ambient_dim());
        std::vector<int> off(static_cast<std::size_t>(d), 0);
        while (true) {
            double wt = 1.0;
            std::size_t flat = 0;
            for (int k = 0; k < d; ++k) {
                wt *= w[static_cast<std::size_t>(k)][static_cast<std::size_t>(off[static_cast<std::size_t>(k)])];
                flat = flat * static_cast<std::size_t>(table_.counts[static_cast<std::size_t>(k)]) +
                       static_cast<std::size_t>(start[static_cast<std::size_t>(k)] + off[static_cast<std::size_t>(k)]);
            }
            const auto& p = table_.points[flat];
            for (int c = 0; c < ambient_dim(); ++c) r(c) += wt * p[static_cast<std::size_t>(c)];
            int k = d - 1;
            while (k >= 0 && ++off[static_cast<std::size_t>(k)] == 6) off[static_cast<std::size_t>(k--)] = 0;
            if (k < 0) break;
        }
        return r;
    }
    Vec orientation_reference(const Vec& u, const Vec& r) const override {
        (void)u;
        if (orient_.size() == 0) return Vec();
        return orient_ - r;
    }
    double curvature_scale() const override { return scale_; }

private:
    static ParamBox check_box(const SurfaceSpec& spec) {
        if (spec.domain.lo.empty())
            throw Error(ErrorKind::config, "table_samples requires an explicit domain");
        ParamBox b = resolve_domain(spec, spec.domain);
        b.periodic.assign(b.lo.size(), false);
        return b;
    }
    SampleTable table_;
    Vec orient_;
    double scale_ = 1.0;
};

} // namespace

const char* to_string(SurfaceFamily f) {
    switch (f) {
    case SurfaceFamily::sphere: return "sphere";
    case SurfaceFamily::ellipsoid: return "ellipsoid";
    case SurfaceFamily::torus: return "torus";
    case SurfaceFamily::tube_around_curve: return "tube_around_curve";
    case SurfaceFamily::graph: return "graph";
    case SurfaceFamily::table_samples: return "table_samples";
    }
    return "unknown";
}

SurfaceFamily family_from_string(const std::string& name) {
    for (auto f : {SurfaceFamily::sphere, SurfaceFamily::ellipsoid, SurfaceFamily::torus,
                   SurfaceFamily::tube_around_curve, SurfaceFamily::graph, SurfaceFamily::table_samples})
        if (name == to_string(f)) return f;
    if (name == "tube") return SurfaceFamily::tube_around_curve;
    throw Error(ErrorKind::config, "unknown surface family '" + name + "'");
}

double ParamBox::max_extent() const {
    double m = 0.0;
    for (int k = 0; k < dim(); ++k) m = std::max(m, extent(k));
    return m;
}

bool ParamBox::interior(const Vec& u, const Vec& margin) const {
    if (u.size() != dim()) return false;
    for (int k = 0; k < dim(); ++k) {
        if (periodic[static_cast<std::size_t>(k)]) continue;
        if (u(k) - margin(k) < lo[static_cast<std::size_t>(k)] || u(k) + margin(k) > hi[static_cast<std::size_t>(k)])
            return false;
    }
    return true;
}

SurfaceSpec default_surface(SurfaceFamily family, int n) {
    SurfaceSpec s;
    s.family = family;
    s.n = n;
    switch (family) {
    case SurfaceFamily::sphere: s.params = {{"rho", 1.0}}; break;
    case SurfaceFamily::ellipsoid:
        s.params = n == 3 ? std::map<std::string, double>{{"a", 3.0}, {"b", 2.0}, {"c", 1.0}}
                          : std::map<std::string, double>{{"a", 3.0}, {"b", 2.0}, {"c", 1.0}, {"d", 1.5}};
        break;
    case SurfaceFamily::torus: s.params = {{"R", 2.0}, {"r0", 1.0}}; break;
    case SurfaceFamily::tube_around_curve:
        s.curve = "helix";
        s.params = {{"A", 2.0}, {"B", 1.0}, {"radius", 0.5}};
        break;
    case SurfaceFamily::graph:
        for (int k = 0; k < n - 1; ++k) {
            GraphTerm t;
            t.coef = 1.0;
            t.exponents.assign(static_cast<std::size_t>(n - 1), 0);
            t.exponents[static_cast<std::size_t>(k)] = 2;
            s.terms.push_back(t);
        }
        break;
    case SurfaceFamily::table_samples:
        throw Error(ErrorKind::config, "table_samples has no default; supply a table");
    }
    return s;
}

Vec SurfaceChart::point(const Vec& u) const {
    const auto x = expand(u);
    Vec r(ambient_dim());
    for (int k = 0; k < ambient_dim(); ++k) r(k) = x[static_cast<std::size_t>(k)].value();
    return r;
}

std::unique_ptr<SurfaceChart> make_chart(const SurfaceSpec& spec) {
    if (spec.n != 3 && spec.n != 4) throw Error(ErrorKind::config, "n must be 3 or 4");
    switch (spec.family) {
    case SurfaceFamily::sphere: return std::make_unique<SphereChart>(spec);
    case SurfaceFamily::ellipsoid: return std::make_unique<EllipsoidChart>(spec);
    case SurfaceFamily::torus: return std::make_unique<TorusChart>(spec);
    case SurfaceFamily::tube_around_curve: return std::make_unique<TubeChart>(spec);
    case SurfaceFamily::graph: return std::make_unique<GraphChart>(spec);
    case SurfaceFamily::table_samples: return std::make_unique<TableChart>(spec);
    }
    throw Error(ErrorKind::config, "unknown surface family");
}

SurfaceSpec tabulate(const SurfaceChart& chart, const std::vector<int>& counts) {
    const int d = chart.param_dim();
    if (static_cast<int>(counts.size()) != d) throw Error(ErrorKind::usage, "tabulate: wrong number of axes");
    SurfaceSpec s;
    s.family = SurfaceFamily::table_samples;
    s.n = chart.ambient_dim();
    s.domain = chart.domain();
    s.domain.periodic.assign(static_cast<std::size_t>(d), false);
    s.table.counts = counts;
    s.params["curvature_scale"] = chart.curvature_scale();
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    while (true) {
        Vec u(d);
        for (int k = 0; k < d; ++k)
            u(k) = chart.domain().lo[static_cast<std::size_t>(k)] +
                   chart.domain().extent(k) * idx[static_cast<std::size_t>(k)] / (counts[static_cast<std::size_t>(k)] - 1);
        const Vec r = chart.point(u);
        s.table.points.emplace_back(r.data(), r.data() + r.size());
        int k = d - 1;
        while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == counts[static_cast<std::size_t>(k)]) idx[static_cast<std::size_t>(k--)] = 0;
        if (k < 0) break;
    }
    return s;
}

} // namespace lightlike
