#pragma once

#include <Eigen/Sparse>
#include <string>
#include <vector>

#include "flexo/mesh/classify.hpp"
#include "flexo/sys/dofmap.hpp"

namespace flexo::sys {

enum class StabMode { None, ExtendedBsplines, DiagonalScaling };

/// Linear map from the raw retained basis to the stabilized basis.
/// Extended B-splines (uniform meshes): boundary functions with a small
/// support fraction inside the domain are expressed as index-space
/// polynomial extrapolations of well-supported ones, removing them as
/// unknowns while preserving degree-p reproduction. Diagonal scaling
/// (hierarchical meshes): structure is kept and the assembled matrix is
/// rescaled symmetrically by 1/sqrt(diag).
struct StabilizationMap {
    StabMode mode = StabMode::None;
    /// Function-level map, raw retained (R) x stabilized (S): a_raw = F c.
    Eigen::SparseMatrix<double> F;
    int n_raw = 0;
    int n_stable = 0;
    std::vector<int> stable_of_retained;  // -1 for eliminated criticals
    std::vector<double> support_fraction;
    std::vector<std::string> log;

    /// Dof-level expansion (u1,u2,phi blocks plus identity on electrodes).
    Eigen::SparseMatrix<double> dof_map(const DofMap& dofs) const;
};

StabilizationMap build_stabilization(const spline::HierarchicalBasis& basis, const DofMap& dofs,
                                     const mesh::CellClassification& cls, StabMode mode,
                                     double critical_threshold = 0.5);

}  // namespace flexo::sys
