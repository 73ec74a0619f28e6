#pragma once

#include <Eigen/Dense>
#include <vector>

namespace flexo::geom {

using Eigen::Vector2d;

/// Rational B-spline curve in the plane: clamped knot vector, positive
/// weights, derivatives up to second order by the quotient rule.
class NurbsCurve2D {
public:
    NurbsCurve2D() = default;
    NurbsCurve2D(int degree, std::vector<double> knots, std::vector<Vector2d> control,
                 std::vector<double> weights);

    /// Straight segment from a to b (degree 1, unit weights).
    static NurbsCurve2D line(const Vector2d& a, const Vector2d& b);
    /// Circular arc of less than half a turn as a single rational quadratic,
    /// counterclockwise from angle a0 to a1 around `center`.
    static NurbsCurve2D arc(const Vector2d& center, double radius, double a0, double a1);

    int degree() const { return degree_; }
    double t_begin() const { return knots_[static_cast<size_t>(degree_)]; }
    double t_end() const { return knots_[control_.size()]; }
    const std::vector<double>& knots() const { return knots_; }
    const std::vector<Vector2d>& control() const { return control_; }
    const std::vector<double>& weights() const { return weights_; }

    /// Point (d=0) or d-th derivative (d=1,2) at parameter t.
    /// Throws if t is outside the parameter interval.
    Vector2d eval(double t, int d = 0) const;

    /// Curve with the same trace and reversed parameter direction.
    NurbsCurve2D reversed() const;

    /// Breakpoints (distinct interior knots plus the interval ends); the
    /// curve is smooth on each subinterval.
    std::vector<double> breakpoints() const;

private:
    int degree_ = 1;
    std::vector<double> knots_;
    std::vector<Vector2d> control_;
    std::vector<double> weights_;
};

/// Basis functions and derivatives on a general knot vector (non-rational),
/// for the span containing t. out[d][j] is the d-th derivative of function
/// span-degree+j. Used by NurbsCurve2D and the boundary loader.
void bspline_basis_ders(int degree, const std::vector<double>& knots, int span, double t,
                        int nders, double out[3][16]);

int find_span(int degree, const std::vector<double>& knots, std::size_t n_ctrl, double t);

}  // namespace flexo::geom
