#include "lightlike/jet.hpp"

#include "lightlike/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lightlike {

namespace {

// Central stencils for d^k/dx^k, O(h^2): (offset, weight) in units of h.
const std::vector<std::pair<int, double>>& stencil(int order) {
    static const std::vector<std::pair<int, double>> s0{{0, 1.0}};
    static const std::vector<std::pair<int, double>> s1{{-1, -0.5}, {1, 0.5}};
    static const std::vector<std::pair<int, double>> s2{{-1, 1.0}, {0, -2.0}, {1, 1.0}};
    static const std::vector<std::pair<int, double>> s3{{-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}};
    switch (order) {
    case 0: return s0;
    case 1: return s1;
    case 2: return s2;
    default: return s3;
    }
}

Vec tensor_difference(const SurfaceChart& chart, const Vec& u, const Taylor::Exponent& alpha, const Vec& h) {
    const int d = chart.param_dim();
    Vec acc = Vec::Zero(chart.ambient_dim());
    std::vector<std::size_t> pos(static_cast<std::size_t>(d), 0);
    while (true) {
        Vec x = u;
        double w = 1.0;
        for (int k = 0; k < d; ++k) {
            const auto& st = stencil(alpha[static_cast<std::size_t>(k)]);
            const auto& [off, wt] = st[pos[static_cast<std::size_t>(k)]];
            x(k) += off * h(k);
            w *= wt / std::pow(h(k), alpha[static_cast<std::size_t>(k)]);
        }
        acc += w * chart.point(x);
        int k = d - 1;
        while (k >= 0 && ++pos[static_cast<std::size_t>(k)] == stencil(alpha[static_cast<std::size_t>(k)]).size())
            pos[static_cast<std::size_t>(k--)] = 0;
        if (k < 0) break;
    }
    return acc;
}

Taylor det(const std::vector<std::vector<Taylor>>& a) {
    const std::size_t k = a.size();
    if (k == 1) return a[0][0];
    if (k == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
    Taylor out(0.0);
    for (std::size_t c = 0; c < k; ++c) {
        std::vector<std::vector<Taylor>> minor;
        for (std::size_t r = 1; r < k; ++r) {
            std::vector<Taylor> row;
            for (std::size_t cc = 0; cc < k; ++cc)
                if (cc != c) row.push_back(a[r][cc]);
            minor.push_back(std::move(row));
        }
        const Taylor term = a[0][c] * det(minor);
        if (c % 2 == 0) out += term;
        else out -= term;
    }
    return out;
}

std::string describe(const Vec& u) {
    std::ostringstream os;
    os.precision(17);
    os << "u = (";
    for (Eigen::Index k = 0; k < u.size(); ++k) os << (k ? ", " : "") << u(k);
    os << ")";
    return os.str();
}

} // namespace

Jet::Jet(Vec u, std::vector<Taylor> r_series, std::vector<Taylor> m_series, bool closed_form)
    : u_(std::move(u)), r_(std::move(r_series)), m_(std::move(m_series)), closed_form_(closed_form) {}

Vec Jet::component(const std::vector<Taylor>& s, Taylor::Exponent alpha) const {
    Vec out(static_cast<Eigen::Index>(s.size()));
    for (std::size_t c = 0; c < s.size(); ++c) out(static_cast<Eigen::Index>(c)) = s[c].derivative(alpha);
    return out;
}

Vec Jet::r() const { return component(r_, {0, 0, 0}); }
Vec Jet::dr(int i) const {
    Taylor::Exponent a{0, 0, 0};
    ++a[static_cast<std::size_t>(i)];
    return component(r_, a);
}
Vec Jet::d2r(int i, int j) const {
    Taylor::Exponent a{0, 0, 0};
    ++a[static_cast<std::size_t>(i)];
    ++a[static_cast<std::size_t>(j)];
    return component(r_, a);
}
Vec Jet::d3r(int i, int j, int k) const {
    Taylor::Exponent a{0, 0, 0};
    ++a[static_cast<std::size_t>(i)];
    ++a[static_cast<std::size_t>(j)];
    ++a[static_cast<std::size_t>(k)];
    return component(r_, a);
}
Vec Jet::m() const { return component(m_, {0, 0, 0}); }
Vec Jet::dm(int i) const {
    Taylor::Exponent a{0, 0, 0};
    ++a[static_cast<std::size_t>(i)];
    return component(m_, a);
}
Vec Jet::d2m(int i, int j) const {
    Taylor::Exponent a{0, 0, 0};
    ++a[static_cast<std::size_t>(i)];
    ++a[static_cast<std::size_t>(j)];
    return component(m_, a);
}

Mat Jet::first_form() const {
    const int d = param_dim();
    std::vector<Vec> t;
    for (int i = 0; i < d; ++i) t.push_back(dr(i));
    Mat g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = t[static_cast<std::size_t>(i)].dot(t[static_cast<std::size_t>(j)]);
    return g;
}

Mat Jet::second_form() const {
    const int d = param_dim();
    const Vec nrm = m();
    Mat h(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            h(i, j) = d2r(i, j).dot(nrm);
            h(j, i) = h(i, j);
        }
    return h;
}

std::pair<Vec, Vec> fd_steps(const SurfaceChart& chart, const FdSteps& fd) {
    const int d = chart.param_dim();
    Vec h(d), h3(d);
    for (int k = 0; k < d; ++k) {
        h(k) = fd.h_rel * chart.domain().extent(k);
        h3(k) = fd.h3_rel * chart.domain().extent(k);
    }
    return {h, h3};
}

Jet compute_jet(const SurfaceChart& chart, const Vec& u, int order, const JetOptions& opts) {
    const int n = chart.ambient_dim();
    const int d = chart.param_dim();
    if (order < 1 || order > 3) throw Error(ErrorKind::usage, "jet order must be 1, 2 or 3");
    if (u.size() != d) throw Error(ErrorKind::usage, "jet: parameter point has wrong dimension");
    if (!u.allFinite()) throw Error(ErrorKind::usage, "jet: parameter point is not finite");

    bool closed = chart.has_closed_form();
    if (opts.mode == JetMode::closed_form && !closed)
        throw Error(ErrorKind::config, "jet: chart has no closed-form derivatives");
    if (opts.mode == JetMode::finite_difference) closed = false;

    std::vector<Taylor> rs;
    if (closed) {
        if (!chart.domain().interior(u, Vec::Zero(d)))
            throw Error(ErrorKind::domain, "jet: " + describe(u) + " lies outside the chart domain");
        rs = chart.expand(u);
        if (order < 3)
            for (auto& c : rs)
                for (int t = 0; t < Taylor::kTerms; ++t)
                    if (Taylor::degree(t) > order) c.coeff(t) = 0.0;
    } else {
        const auto [h, h3] = fd_steps(chart, opts.fd);
        const Vec margin = order == 3 ? Vec(2.0 * h3) : Vec(h);
        if (!chart.domain().interior(u, margin))
            throw Error(ErrorKind::domain, "jet: " + describe(u) + " is too close to the domain boundary");
        rs.assign(static_cast<std::size_t>(n), Taylor(0.0));
        for (int t = 0; t < Taylor::kTerms; ++t) {
            const int deg = Taylor::degree(t);
            if (deg > order) continue;
            const auto& alpha = Taylor::exponent(t);
            Vec value;
            if (deg == 0) {
                value = chart.point(u);
            } else {
                const Vec& step = deg == 3 ? h3 : h;
                value = tensor_difference(chart, u, alpha, step);
                if (opts.fd.richardson)
                    value = (4.0 * tensor_difference(chart, u, alpha, 0.5 * step) - value) / 3.0;
            }
            double fact = 1.0;
            for (int a : alpha)
                for (int q = 2; q <= a; ++q) fact *= q;
            for (int c = 0; c < n; ++c) rs[static_cast<std::size_t>(c)].coeff(t) = value(c) / fact;
        }
    }

    // tangent expansions r_i and the generalized cross product
    std::vector<std::vector<Taylor>> tangents(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
        for (int c = 0; c < n; ++c) tangents[static_cast<std::size_t>(i)].push_back(rs[static_cast<std::size_t>(c)].partial(i));

    std::vector<Taylor> normal(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        std::vector<std::vector<Taylor>> minor;
        for (int row = 0; row < n; ++row) {
            if (row == k) continue;
            std::vector<Taylor> line;
            for (int i = 0; i < d; ++i) line.push_back(tangents[static_cast<std::size_t>(i)][static_cast<std::size_t>(row)]);
            minor.push_back(std::move(line));
        }
        normal[static_cast<std::size_t>(k)] = (k % 2 == 0) ? det(minor) : -det(minor);
    }
    Taylor norm2(0.0);
    for (const auto& c : normal) norm2 += c * c;

    double tangent_scale = 1.0;
    for (int i = 0; i < d; ++i) {
        double s = 0.0;
        for (const auto& c : tangents[static_cast<std::size_t>(i)]) s += c.value() * c.value();
        tangent_scale *= std::sqrt(s);
    }
    if (!(norm2.value() > 1e-24 * tangent_scale * tangent_scale) || !(tangent_scale > 0.0))
        throw Error(ErrorKind::geometry, "chart is not immersed at " + describe(u));

    const Taylor inv = reciprocal(sqrt(norm2));
    std::vector<Taylor> ms;
    for (const auto& c : normal) ms.push_back(c * inv);

    Vec rv(n), mv(n);
    for (int c = 0; c < n; ++c) {
        rv(c) = rs[static_cast<std::size_t>(c)].value();
        mv(c) = ms[static_cast<std::size_t>(c)].value();
    }
    const Vec ref = chart.orientation_reference(u, rv);
    if (ref.size() == n && mv.dot(ref) < 0.0)
        for (auto& c : ms) c = -c;

    return Jet(u, std::move(rs), std::move(ms), closed);
}

std::size_t ParamGrid::size() const {
    std::size_t s = 1;
    for (int c : counts) s *= static_cast<std::size_t>(c);
    return s;
}

std::vector<int> ParamGrid::index(std::size_t flat) const {
    std::vector<int> idx(counts.size());
    for (std::size_t k = counts.size(); k-- > 0;) {
        idx[k] = static_cast<int>(flat % static_cast<std::size_t>(counts[k]));
        flat /= static_cast<std::size_t>(counts[k]);
    }
    return idx;
}

std::size_t ParamGrid::flat(const std::vector<int>& idx) const {
    std::size_t f = 0;
    for (std::size_t k = 0; k < counts.size(); ++k) f = f * static_cast<std::size_t>(counts[k]) + static_cast<std::size_t>(idx[k]);
    return f;
}

Vec ParamGrid::point(std::size_t flat_index) const {
    const auto idx = index(flat_index);
    Vec u(static_cast<Eigen::Index>(counts.size()));
    for (std::size_t k = 0; k < counts.size(); ++k)
        u(static_cast<Eigen::Index>(k)) = box.lo[k] + (box.hi[k] - box.lo[k]) * (idx[k] + 0.5) / counts[k];
    return u;
}

int ParamGrid::ring(std::size_t flat_index) const {
    const auto idx = index(flat_index);
    int r = 1 << 30;
    for (std::size_t k = 0; k < counts.size(); ++k)
        if (!box.periodic[k]) r = std::min({r, idx[k], counts[k] - 1 - idx[k]});
    return r;
}

std::vector<Jet> sample_chart(const SurfaceChart& chart, const ParamGrid& grid, const JetOptions& opts) {
    if (static_cast<int>(grid.counts.size()) != chart.param_dim())
        throw Error(ErrorKind::usage, "sample_chart: grid has wrong number of axes");
    for (int c : grid.counts)
        if (c < 8) throw Error(ErrorKind::usage, "sample_chart: grid must have at least 8 points per axis");
    std::vector<Jet> out;
    out.reserve(grid.size());
    for (std::size_t f = 0; f < grid.size(); ++f) {
        Jet j = compute_jet(chart, grid.point(f), 3, opts);
        Eigen::LLT<Mat> llt(j.first_form());
        if (llt.info() != Eigen::Success)
            throw Error(ErrorKind::geometry, "first fundamental form not positive definite at " + describe(grid.point(f)));
        out.push_back(std::move(j));
    }
    return out;
}

} // namespace lightlike
