#pragma once

#include <vector>

#include "flexo/geom/boundary_model.hpp"
#include "flexo/spline/hierarchical_basis.hpp"

namespace flexo::mesh {

using geom::Vector2d;

/// One integration cell of the (possibly hierarchically refined) embedding
/// grid: cells are taken at the finest level any overlapping basis function
/// lives on, so every basis function is polynomial on each leaf.
struct LeafCell {
    int level = 0;
    int cx = 0, cy = 0;  // cell indices at `level`
    Vector2d lo = Vector2d::Zero();
    Vector2d hi = Vector2d::Zero();

    double size() const { return hi.x() - lo.x(); }
};

/// Cartesian embedding grid mirroring the refinement state of a
/// HierarchicalBasis. The physical boundary must stay strictly inside the
/// grid box (positive margin).
class EmbeddingGrid {
public:
    EmbeddingGrid(const spline::HierarchicalBasis& basis, const geom::BoundaryModel& boundary);

    const spline::HierarchicalBasis& basis() const { return *basis_; }
    const geom::BoundaryModel& boundary() const { return *boundary_; }

    /// Leaf cells in deterministic (level-major, row-major) order.
    const std::vector<LeafCell>& leaves() const { return leaves_; }

    /// Leaf containing the point (ties resolved toward lower indices);
    /// returns -1 outside the grid box.
    int leaf_containing(const Vector2d& x) const;

private:
    const spline::HierarchicalBasis* basis_;
    const geom::BoundaryModel* boundary_;
    std::vector<LeafCell> leaves_;
    std::vector<std::vector<int>> buckets_;  // level-0 cell -> leaf ids
};

}  // namespace flexo::mesh
