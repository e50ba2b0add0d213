#include "lightlike/taylor.hpp"

#include <cmath>
#include <vector>

namespace lightlike {

namespace {

struct Tables {
    std::array<Taylor::Exponent, Taylor::kTerms> exps{};
    std::array<int, Taylor::kTerms> deg{};
    std::array<double, Taylor::kTerms> factorial{}; // alpha!
    // Products of terms whose degrees sum to <= kOrder: (a, b, a*b).
    std::vector<std::array<int, 3>> products;
    // partial[k][t] = term of d/dx_k of monomial t (or -1), with multiplier exps[t][k].
    std::array<std::array<int, Taylor::kTerms>, Taylor::kVars> lowered{};

    Tables() {
        int t = 0;
        for (int d = 0; d <= Taylor::kOrder; ++d)
            for (int a = d; a >= 0; --a)
                for (int b = d - a; b >= 0; --b) {
                    const int c = d - a - b;
                    exps[static_cast<std::size_t>(t)] = {a, b, c};
                    deg[static_cast<std::size_t>(t)] = d;
                    auto fact = [](int k) { double f = 1; for (int i = 2; i <= k; ++i) f *= i; return f; };
                    factorial[static_cast<std::size_t>(t)] = fact(a) * fact(b) * fact(c);
                    ++t;
                }
        for (int i = 0; i < Taylor::kTerms; ++i)
            for (int j = 0; j < Taylor::kTerms; ++j) {
                const auto& ei = exps[static_cast<std::size_t>(i)];
                const auto& ej = exps[static_cast<std::size_t>(j)];
                Taylor::Exponent s{ei[0] + ej[0], ei[1] + ej[1], ei[2] + ej[2]};
                const int k = find(s);
                if (k >= 0) products.push_back({i, j, k});
            }
        for (int v = 0; v < Taylor::kVars; ++v)
            for (int i = 0; i < Taylor::kTerms; ++i) {
                auto e = exps[static_cast<std::size_t>(i)];
                if (e[static_cast<std::size_t>(v)] == 0) {
                    lowered[static_cast<std::size_t>(v)][static_cast<std::size_t>(i)] = -1;
                    continue;
                }
                e[static_cast<std::size_t>(v)] -= 1;
                lowered[static_cast<std::size_t>(v)][static_cast<std::size_t>(i)] = find(e);
            }
    }

    int find(const Taylor::Exponent& e) const {
        if (e[0] + e[1] + e[2] > Taylor::kOrder) return -1;
        for (int t = 0; t < Taylor::kTerms; ++t)
            if (exps[static_cast<std::size_t>(t)] == e) return t;
        return -1;
    }
};

const Tables& tables() {
    static const Tables tb;
    return tb;
}

} // namespace

int Taylor::index(const Exponent& alpha) { return tables().find(alpha); }
const Taylor::Exponent& Taylor::exponent(int term) { return tables().exps[static_cast<std::size_t>(term)]; }
int Taylor::degree(int term) { return tables().deg[static_cast<std::size_t>(term)]; }

Taylor Taylor::variable(int k, double value) {
    Taylor t(value);
    Exponent e{0, 0, 0};
    e[static_cast<std::size_t>(k)] = 1;
    t.c_[static_cast<std::size_t>(index(e))] = 1.0;
    return t;
}

double Taylor::derivative(const Exponent& alpha) const {
    const int t = index(alpha);
    if (t < 0) return 0.0;
    return c_[static_cast<std::size_t>(t)] * tables().factorial[static_cast<std::size_t>(t)];
}

Taylor Taylor::partial(int k) const {
    const auto& tb = tables();
    Taylor out;
    for (int i = 0; i < kTerms; ++i) {
        const int lo = tb.lowered[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
        if (lo < 0) continue;
        out.c_[static_cast<std::size_t>(lo)] +=
            c_[static_cast<std::size_t>(i)] * tb.exps[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    }
    return out;
}

Taylor& Taylor::operator+=(const Taylor& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

Taylor& Taylor::operator-=(const Taylor& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

Taylor& Taylor::operator*=(const Taylor& o) {
    std::array<double, kTerms> r{};
    for (const auto& p : tables().products)
        r[static_cast<std::size_t>(p[2])] += c_[static_cast<std::size_t>(p[0])] * o.c_[static_cast<std::size_t>(p[1])];
    c_ = r;
    return *this;
}

Taylor& Taylor::operator/=(const Taylor& o) { return *this *= reciprocal(o); }

Taylor compose(const Taylor& x, double f0, double f1, double f2, double f3) {
    Taylor d = x;
    d.coeff(0) = 0.0;
    const Taylor d2 = d * d;
    const Taylor d3 = d2 * d;
    Taylor out(f0);
    out += f1 * d;
    out += (0.5 * f2) * d2;
    out += (f3 / 6.0) * d3;
    return out;
}

Taylor sin(const Taylor& x) {
    const double s = std::sin(x.value()), c = std::cos(x.value());
    return compose(x, s, c, -s, -c);
}

Taylor cos(const Taylor& x) {
    const double s = std::sin(x.value()), c = std::cos(x.value());
    return compose(x, c, -s, -c, s);
}

Taylor sqrt(const Taylor& x) {
    const double a = x.value();
    const double r = std::sqrt(a);
    return compose(x, r, 0.5 / r, -0.25 / (a * r), 0.375 / (a * a * r));
}

Taylor reciprocal(const Taylor& x) {
    const double a = x.value();
    const double i = 1.0 / a;
    return compose(x, i, -i * i, 2.0 * i * i * i, -6.0 * i * i * i * i);
}

} // namespace lightlike
