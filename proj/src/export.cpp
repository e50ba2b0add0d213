#include "lightlike/export.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace lightlike {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::io, "cannot write " + path);
    return out;
}

void vertex(std::ostream& os, const Vec& c) { os << "v " << num(c(0)) << ' ' << num(c(1)) << ' ' << num(c(2)) << '\n'; }

} // namespace

std::vector<TableRow> table_rows(const ClassificationReport& rep) {
    std::vector<TableRow> rows;
    for (const auto& b : rep.focal.branches)
        for (const auto& s : b.samples) {
            TableRow r;
            const Vec u = rep.grid.point(s.index);
            r.u.assign(u.data(), u.data() + u.size());
            r.branch = b.branch;
            r.root = s.record.root;
            r.multiplicity = s.record.multiplicity;
            r.cls = to_string(s.record.cls);
            r.focus = focus_coordinates(s.record);
            r.causal = s.rank.causal_defined ? to_string(s.rank.causal) : "none";
            rows.push_back(std::move(r));
        }
    return rows;
}

void write_table(const std::vector<TableRow>& rows, int n, const std::string& path) {
    std::ofstream out = open_out(path);
    out << '#';
    for (int k = 1; k < n; ++k) out << " u" << k;
    out << " branch root multiplicity class";
    for (int k = 0; k < n + 2; ++k) out << " B" << k;
    out << " causal\n";
    for (const auto& r : rows) {
        for (double v : r.u) out << num(v) << ' ';
        out << r.branch << ' ' << num(r.root) << ' ' << r.multiplicity << ' ' << r.cls;
        for (double v : r.focus) out << ' ' << num(v);
        out << ' ' << r.causal << '\n';
    }
    if (!out) throw Error(ErrorKind::io, "write failed for " + path);
}

std::vector<TableRow> read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot read " + path);
    std::vector<TableRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.size() < 12 || (tok.size() - 6) % 2 != 0) throw Error(ErrorKind::input, "malformed table row: " + line);
        const std::size_t n = (tok.size() - 6) / 2;
        auto real = [](const std::string& s) { return std::strtod(s.c_str(), nullptr); };
        TableRow r;
        std::size_t i = 0;
        for (; i < n - 1; ++i) r.u.push_back(real(tok[i]));
        r.branch = std::stoi(tok[i++]);
        r.root = real(tok[i++]);
        r.multiplicity = std::stoi(tok[i++]);
        r.cls = tok[i++];
        for (std::size_t k = 0; k < n + 2; ++k) r.focus.push_back(real(tok[i++]));
        r.causal = tok[i];
        rows.push_back(std::move(r));
    }
    return rows;
}

std::optional<Vec> sphere_center(const std::vector<double>& focus) {
    if (focus.size() < 3 || focus.front() != 1.0) return std::nullopt;
    Vec c(static_cast<Eigen::Index>(focus.size() - 2));
    for (Eigen::Index k = 0; k < c.size(); ++k) c(k) = focus[static_cast<std::size_t>(k + 1)];
    return c;
}

std::vector<ObjSummary> write_obj(const ClassificationReport& rep, const std::string& dir) {
    std::vector<ObjSummary> out;
    if (rep.config.n != 3) return out;
    const ParamGrid& grid = rep.grid;

    for (const auto& b : rep.focal.branches) {
        std::map<std::size_t, Vec> centers;
        for (const auto& s : b.samples)
            if (auto c = sphere_center(focus_coordinates(s.record))) centers[s.index] = *c;
        ObjSummary sum;
        sum.branch = b.branch;
        sum.path = dir + "/focal_branch_" + std::to_string(b.branch) + ".obj";
        std::ofstream os = open_out(sum.path);
        os << "# focal branch " << b.branch << ", multiplicity " << b.multiplicity << ", class " << to_string(b.cls)
           << ", dimension " << b.est_dim << "\n";

        if (centers.empty()) {
            out.push_back(sum);
            continue;
        }
        if (b.est_dim == 0) {
            vertex(os, centers.begin()->second);
            os << "p 1\n";
            sum.vertices = 1;
            sum.element = "p";
        } else if (b.est_dim == 1) {
            // Sweep the axis along which the centers move most, through the middle of the other one.
            int axis = 0;
            double best = -1.0;
            for (int k = 0; k < 2; ++k) {
                std::vector<int> idx = {grid.counts[0] / 2, grid.counts[1] / 2};
                double len = 0.0;
                for (int i = 0; i + 1 < grid.counts[static_cast<std::size_t>(k)]; ++i) {
                    idx[static_cast<std::size_t>(k)] = i;
                    const auto a = centers.find(grid.flat(idx));
                    idx[static_cast<std::size_t>(k)] = i + 1;
                    const auto c = centers.find(grid.flat(idx));
                    if (a != centers.end() && c != centers.end()) len += (c->second - a->second).norm();
                }
                if (len > best) {
                    best = len;
                    axis = k;
                }
            }
            std::vector<int> idx = {grid.counts[0] / 2, grid.counts[1] / 2};
            std::vector<Vec> line;
            for (int i = 0; i < grid.counts[static_cast<std::size_t>(axis)]; ++i) {
                idx[static_cast<std::size_t>(axis)] = i;
                const auto it = centers.find(grid.flat(idx));
                if (it != centers.end()) line.push_back(it->second);
            }
            // A center passing through infinity shows up as a jump far above the
            // typical step; the polyline is broken there instead of crossing space.
            std::vector<double> steps;
            for (std::size_t i = 0; i + 1 < line.size(); ++i) steps.push_back((line[i + 1] - line[i]).norm());
            double median = 0.0;
            if (!steps.empty()) {
                std::vector<double> s = steps;
                std::nth_element(s.begin(), s.begin() + s.size() / 2, s.end());
                median = s[s.size() / 2];
            }
            const double jump = 10.0 * median;
            std::vector<std::size_t> breaks;
            for (std::size_t i = 0; i < steps.size(); ++i)
                if (steps[i] > jump) breaks.push_back(i);
            sum.closed = grid.box.periodic[static_cast<std::size_t>(axis)] && line.size() > 2 && breaks.empty() &&
                         static_cast<int>(line.size()) == grid.counts[static_cast<std::size_t>(axis)] &&
                         (line.front() - line.back()).norm() <= jump;
            for (const auto& v : line) vertex(os, v);
            std::size_t start = 0;
            breaks.push_back(line.size() - 1);
            for (std::size_t b : breaks) {
                if (b > start) {
                    os << 'l';
                    for (std::size_t i = start; i <= b; ++i) os << ' ' << i + 1;
                    if (sum.closed) os << " 1";
                    os << '\n';
                }
                start = b + 1;
            }
            sum.vertices = static_cast<int>(line.size());
            sum.element = "l";
        } else {
            std::map<std::size_t, int> vid;
            for (const auto& [p, c] : centers) {
                vertex(os, c);
                vid[p] = static_cast<int>(vid.size()) + 1;
            }
            const int c0 = grid.counts[0], c1 = grid.counts[1];
            for (int i = 0; i < c0; ++i)
                for (int j = 0; j < c1; ++j) {
                    if ((i + 1 == c0 && !grid.box.periodic[0]) || (j + 1 == c1 && !grid.box.periodic[1])) continue;
                    const int i1 = (i + 1) % c0, j1 = (j + 1) % c1;
                    const std::size_t q[4] = {grid.flat({i, j}), grid.flat({i1, j}), grid.flat({i1, j1}),
                                              grid.flat({i, j1})};
                    bool ok = true;
                    for (auto p : q) ok = ok && vid.count(p);
                    if (!ok) continue;
                    os << 'f';
                    for (auto p : q) os << ' ' << vid[p];
                    os << '\n';
                }
            sum.vertices = static_cast<int>(vid.size());
            sum.element = "f";
        }
        if (!os) throw Error(ErrorKind::io, "write failed for " + sum.path);
        out.push_back(sum);
    }
    return out;
}

} // namespace lightlike
