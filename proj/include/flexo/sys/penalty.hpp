#pragma once

#include "flexo/forms/bc.hpp"
#include "flexo/mesh/quadrature.hpp"

#include "flexo/mat/materials.hpp"

namespace flexo::sys {

/// Cell-wise lower bounds for the Nitsche penalties from the generalized
/// eigenvalue problems B_x = lambda V x, with V the cell energy and B the
/// boundary integrals of t.t, r.r and j.j on the Dirichlet portions. V is
/// always singular; the eigenvalue problems are solved on its numerical
/// range, and a Dirichlet mode outside that range reports `unbounded`.
struct PenaltyBounds {
    bool has_u = false, has_v = false, has_cu = false;
    double Ku = 0, Kv = 0, Kcu = 0;
    double bound_u = 0, bound_v = 0, bound_cu = 0;
    bool unbounded = false;
};

PenaltyBounds penalty_bounds_for_cell(const mesh::CellInfo& info, const mesh::CellQuadrature& cq,
                                      const mesh::EmbeddingGrid& grid, const forms::BCRegionSpec& bc,
                                      const mat::MaterialSet& material, double alpha1 = 1.0,
                                      double alpha2 = 1.0);

}  // namespace flexo::sys
