#pragma once

#include "flexo/forms/state.hpp"
#include "flexo/mesh/grid.hpp"
#include "flexo/sys/dofmap.hpp"

namespace flexo::post {

/// Discrete solution: raw retained coefficients for (u1, u2, phi) plus the
/// electrode values, evaluated through the basis. Read-only and safe to
/// query from many threads.
class SolutionField {
public:
    SolutionField(const mesh::EmbeddingGrid& grid, const sys::DofMap& dofs,
                  Eigen::VectorXd raw_coefficients);

    const mesh::EmbeddingGrid& grid() const { return *grid_; }
    const sys::DofMap& dofs() const { return *dofs_; }
    const Eigen::VectorXd& raw() const { return raw_; }

    double electrode_value(int e) const { return raw_(dofs_->electrode_dof(e)); }

    /// Fields and derivatives at a point, through the requested order
    /// (0..3 for u, capped at 2 for phi). Throws outside the domain unless
    /// `check_inside` is false (quadrature-driven callers already know).
    forms::StateDerivatives eval(const Eigen::Vector2d& x, int max_order = 1,
                                 bool check_inside = true) const;

private:
    const mesh::EmbeddingGrid* grid_;
    const sys::DofMap* dofs_;
    Eigen::VectorXd raw_;
};

}  // namespace flexo::post
