#pragma once

// Truncated multivariate Taylor polynomials (forward-mode jets).
//
// A Taylor value carries every coefficient of total degree <= 3 in up to three
// variables. Arithmetic and elementary functions propagate the truncated
// expansion exactly, so evaluating a closed-form surface on Taylor arguments
// yields its partial derivatives to third order at machine precision.

#include <array>
#include <cstddef>

namespace lightlike {

class Taylor {
public:
    static constexpr int kVars = 3;
    static constexpr int kOrder = 3;
    static constexpr int kTerms = 20;

    using Exponent = std::array<int, kVars>;

    Taylor() = default;
    Taylor(double constant) { c_[0] = constant; } // NOLINT: implicit by design of the arithmetic

    /// The independent variable x_k expanded around `value`.
    static Taylor variable(int k, double value);

    double value() const noexcept { return c_[0]; }
    double coeff(int term) const noexcept { return c_[static_cast<std::size_t>(term)]; }
    double& coeff(int term) noexcept { return c_[static_cast<std::size_t>(term)]; }

    /// Partial derivative d^alpha at the expansion point.
    double derivative(const Exponent& alpha) const;

    /// Expansion of d/dx_k. Only the terms up to degree kOrder-1 are exact.
    Taylor partial(int k) const;

    /// Term index of a monomial, or -1 if its degree exceeds kOrder.
    static int index(const Exponent& alpha);
    static const Exponent& exponent(int term);
    static int degree(int term);

    Taylor& operator+=(const Taylor& o);
    Taylor& operator-=(const Taylor& o);
    Taylor& operator*=(const Taylor& o);
    Taylor& operator/=(const Taylor& o);

    friend Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
    friend Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }
    friend Taylor operator*(Taylor a, const Taylor& b) { return a *= b; }
    friend Taylor operator/(Taylor a, const Taylor& b) { return a /= b; }
    friend Taylor operator*(double s, Taylor a) {
        for (double& x : a.c_) x *= s;
        return a;
    }
    friend Taylor operator*(Taylor a, double s) { return s * a; }
    friend Taylor operator-(Taylor a) {
        for (double& x : a.c_) x = -x;
        return a;
    }

private:
    std::array<double, kTerms> c_{};
};

/// f(a + d) for a scalar function with derivatives f0..f3 at a, d = x - a.
Taylor compose(const Taylor& x, double f0, double f1, double f2, double f3);

Taylor sin(const Taylor& x);
Taylor cos(const Taylor& x);
Taylor sqrt(const Taylor& x);
Taylor reciprocal(const Taylor& x);

} // namespace lightlike
