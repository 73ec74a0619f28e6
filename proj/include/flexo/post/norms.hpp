#pragma once

#include "flexo/mesh/quadrature.hpp"
#include "flexo/post/solution_field.hpp"

namespace flexo::post {

/// Reference fields with derivatives: deriv orders (dx, dy) up to 4 for the
/// displacement components and up to 3 for the potential (enough for both
/// error norms and manufactured sources).
struct ReferenceSolution {
    virtual ~ReferenceSolution() = default;
    virtual double u(int comp, int dx, int dy, const Eigen::Vector2d& x) const = 0;
    virtual double phi(int dx, int dy, const Eigen::Vector2d& x) const = 0;
};

/// L2 norm and H1..H3 seminorms of the error vector (u1-u1*, u2-u2*,
/// phi-phi*), plus the same measures of the reference for relative errors.
struct ErrorNorms {
    double l2 = 0, h1 = 0, h2 = 0, h3 = 0;
    double ref_l2 = 0, ref_h1 = 0, ref_h2 = 0, ref_h3 = 0;

    double rel_l2() const { return ref_l2 > 0 ? l2 / ref_l2 : l2; }
};

ErrorNorms error_norms(const SolutionField& sol, const ReferenceSolution& ref,
                       const mesh::QuadratureScheme& quad);

}  // namespace flexo::post
