#pragma once

#include <array>
#include <vector>

namespace flexo::spline {

/// Highest derivative order the solver ever requests from a basis.
/// The Nitsche traction terms involve third derivatives of the displacement;
/// nothing in the formulation needs more.
inline constexpr int kMaxDeriv = 3;

/// Univariate B-spline basis of degree p on the uniform knot vector
/// [0, 1, ..., n+p]. Function i has support [i, i+p+1] and is a translate
/// of function 0: B_i(xi) = B_0(xi - i). The partition of unity holds on
/// the interior spans [p, n].
class UniformBasis1D {
public:
    UniformBasis1D(int degree, int count);

    int degree() const { return p_; }
    int count() const { return n_; }

    /// Parametric interval where all p+1 overlapping functions are present.
    double unity_begin() const { return static_cast<double>(p_); }
    double unity_end() const { return static_cast<double>(n_); }

    /// Value or d-th derivative of B_i at xi (Cox-de Boor recursion).
    /// Zero outside the support; derivatives of order > p are zero.
    /// Throws std::invalid_argument for d outside [0, kMaxDeriv] or bad i.
    double eval(int i, double xi, int d = 0) const;

private:
    int p_;
    int n_;
};

/// Values and derivatives (orders 0..kMaxDeriv) of the p+1 functions that are
/// nonzero on the span [span, span+1], evaluated at local coordinate
/// tau = xi - span in [0, 1]. Entry [j][d] is the d-th derivative of the
/// function with index span - p + j.
struct SpanValues {
    int degree = 0;
    std::array<std::array<double, kMaxDeriv + 1>, 8> v{};  // up to p = 7

    const std::array<double, kMaxDeriv + 1>& operator[](int j) const { return v[static_cast<size_t>(j)]; }
};

/// Evaluate all nonzero uniform B-spline functions on a unit span.
/// tau must lie in [0, 1]; derivative orders up to kMaxDeriv are filled.
SpanValues eval_span(int degree, double tau);

/// Single-function evaluation against the pure-translation convention
/// B_i(xi) = B_0(xi - i) with integer knots; used by UniformBasis1D and the
/// hierarchical levels. d beyond the polynomial degree yields zero.
double eval_translated(int degree, double xi_minus_i, int d);

/// Value and derivatives 0..kMaxDeriv in one pass (kernel hot path).
void eval_translated_all(int degree, double xi_minus_i, double out[kMaxDeriv + 1]);

/// Two-scale (subdivision) coefficients s^p of length p+2:
/// B_i(xi) = sum_j s_j B(2 xi - 2 i - j). They sum to 2.
std::vector<double> two_scale_coeffs(int degree);

}  // namespace flexo::spline
