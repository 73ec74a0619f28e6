#pragma once

#include <Eigen/Sparse>
#include <functional>

#include "flexo/forms/bc.hpp"
#include "flexo/forms/local_blocks.hpp"
#include "flexo/mesh/quadrature.hpp"
#include "flexo/sys/dofmap.hpp"
#include "flexo/sys/stabilization.hpp"

namespace flexo::sys {

struct LoadFns {
    std::function<Eigen::Vector2d(const Eigen::Vector2d&)> body_force;  // null = zero
    std::function<double(const Eigen::Vector2d&)> free_charge;          // null = zero
};

using PenaltyFn = std::function<forms::PenaltySet(std::size_t cell_index, const mesh::CellInfo&)>;

/// Symmetric indefinite saddle system over (u, phi, electrode) unknowns in
/// the stabilized basis. Dof layout: u at [0, 2S), phi at [2S, 3S),
/// electrode scalars at the tail.
struct AssembledSystem {
    Eigen::SparseMatrix<double> A;
    Eigen::VectorXd b;
    int n_stable = 0;
    int n_electrodes = 0;
    Eigen::SparseMatrix<double> expand_map;  // stabilized dofs -> raw retained dofs
    Eigen::VectorXd diag_scale;              // nonempty in diagonal-scaling mode
    std::vector<std::string> warnings;

    int n_dofs() const { return 3 * n_stable + n_electrodes; }

    /// Principal submatrix on the index range [r0, r1).
    Eigen::SparseMatrix<double> block(int r0, int r1) const;
    Eigen::SparseMatrix<double> Kuu() const { return block(0, 2 * n_stable); }
    Eigen::SparseMatrix<double> Kphiphi() const { return block(2 * n_stable, 3 * n_stable); }

    /// Raw retained coefficient vector (u1,u2,phi per retained function plus
    /// electrode values) from a solution of this system.
    Eigen::VectorXd expand(const Eigen::VectorXd& x) const;
};

/// Evaluate all local basis functions at one point, filling the ten
/// derivative slots; `scratch` must provide 10 arrays of size n.
void eval_point_basis(const spline::HierarchicalBasis& basis, const std::vector<std::size_t>& fns,
                      const Eigen::Vector2d& x, int max_slot, std::vector<double> scratch[10],
                      forms::PointBasis& pb);

AssembledSystem assemble(const mesh::EmbeddingGrid& grid, const mesh::CellClassification& cls,
                         const mesh::QuadratureScheme& quad, const DofMap& dofs,
                         const StabilizationMap& stab, const forms::BCRegionSpec& bc,
                         const mat::MaterialSet& material, const PenaltyFn& penalties,
                         const LoadFns& loads, int threads = 1);

}  // namespace flexo::sys
