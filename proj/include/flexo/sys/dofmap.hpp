#pragma once

#include <vector>

#include "flexo/mesh/classify.hpp"
#include "flexo/spline/hierarchical_basis.hpp"

namespace flexo::sys {

/// Maps (field, basis function) pairs to global equation numbers.
/// Functions with no support in the physical domain are dropped. Layout:
/// u1,u2 of retained function r at 2r, 2r+1; phi at 2R + r; electrode
/// scalars contiguous at the tail.
class DofMap {
public:
    DofMap(const spline::HierarchicalBasis& basis, const mesh::CellClassification& cls,
           int n_electrodes);

    int n_retained() const { return n_retained_; }
    int n_electrodes() const { return n_electrodes_; }
    int n_dofs() const { return 3 * n_retained_ + n_electrodes_; }

    /// Retained index of a basis function, or -1 when dropped.
    int retained_of(std::size_t fn_id) const { return retained_of_[fn_id]; }
    std::size_t fn_of(int retained) const { return fn_of_[static_cast<size_t>(retained)]; }

    int u_dof(int retained, int comp) const { return 2 * retained + comp; }
    int phi_dof(int retained) const { return 2 * n_retained_ + retained; }
    int electrode_dof(int e) const { return 3 * n_retained_ + e; }

private:
    int n_retained_ = 0;
    int n_electrodes_ = 0;
    std::vector<int> retained_of_;
    std::vector<std::size_t> fn_of_;
};

}  // namespace flexo::sys
