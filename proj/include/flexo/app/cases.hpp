#pragma once

#include <memory>

#include "flexo/forms/bc.hpp"
#include "flexo/geom/boundary_model.hpp"
#include "flexo/post/norms.hpp"
#include "flexo/sys/assemble.hpp"

namespace flexo::app {

/// Builtin geometries in solver coordinates. Regions are labeled by side
/// (left/bottom/right/top or outer/hole); square-like shapes carry named
/// corners bl, br, tr, tl.
geom::BoundaryModel square_boundary(double half);
geom::BoundaryModel rectangle_boundary(double xa, double ya, double xb, double yb);
geom::BoundaryModel circle_boundary(double radius);
geom::BoundaryModel circle_with_square_hole(double radius, double hole_side, double angle);
geom::BoundaryModel trapezoid_boundary(double half_bottom, double half_top, double height);

/// Bivariate polynomial component field: coeff(i, j) multiplies x1^i x2^j.
class PolyReference : public post::ReferenceSolution {
public:
    PolyReference(Eigen::MatrixXd u1, Eigen::MatrixXd u2, Eigen::MatrixXd phi);
    double u(int comp, int dx, int dy, const Eigen::Vector2d& x) const override;
    double phi(int dx, int dy, const Eigen::Vector2d& x) const override;

private:
    Eigen::MatrixXd c_[3];
};

/// Cubic synthetic solution of the corner-condition study, in coordinates
/// normalized by the domain half-size.
std::shared_ptr<post::ReferenceSolution> corner_study_reference();

/// Sinusoidal synthetic solution of the convergence study:
/// u1 = sin(pi x1), u2 = sin(pi x2), phi = sin(pi x1/10) + sin(pi x2/10).
std::shared_ptr<post::ReferenceSolution> sinusoid_reference();

/// Bulk sources that make `ref` the exact solution: b_i = -(sigma^_ij -
/// sigma~_ijk,k)_,j and q = D^_l,l, evaluated from the reference derivatives.
sys::LoadFns manufactured_loads(std::shared_ptr<post::ReferenceSolution> ref,
                                const mat::MaterialSet& m);

/// Dirichlet data read off a reference solution.
forms::VectorData reference_u_data(std::shared_ptr<post::ReferenceSolution> ref);
forms::VectorData reference_v_data(std::shared_ptr<post::ReferenceSolution> ref);  // grad u . n
forms::ScalarData reference_phi_data(std::shared_ptr<post::ReferenceSolution> ref);

}  // namespace flexo::app
