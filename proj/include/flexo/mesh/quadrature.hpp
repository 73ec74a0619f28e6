#pragma once

#include <array>
#include <string>
#include <vector>

#include "flexo/mesh/classify.hpp"

namespace flexo::mesh {

struct BulkPoint {
    Vector2d x = Vector2d::Zero();
    double w = 0;
};

struct BoundaryPoint {
    Vector2d x = Vector2d::Zero();
    double w = 0;  // includes the curve speed
    geom::BoundaryFrame frame;
    int region_id = -1;
    int chain = 0, segment = 0;
    double t = 0;
};

struct CellQuadrature {
    std::vector<BulkPoint> bulk;
    std::vector<BoundaryPoint> boundary;
    std::vector<int> corners;  // indices into BoundaryModel::corners()
};

struct QuadratureScheme {
    std::vector<CellQuadrature> cells;  // parallel to classification
    std::vector<std::string> warnings;

    double total_area() const;
    double total_boundary_length() const;
};

using DisplayTri = std::array<Vector2d, 3>;

/// Bulk rule for one cell. Inner cells carry a tensor Gauss rule with
/// q points per axis. Cut cells are polygonized from the boundary pieces
/// and the cell edges, fan-triangulated, and integrated with mapped Gauss
/// rules; triangles with a curved edge use the exact curve parametrization
/// (transfinite blend), so the geometry carries no approximation error.
/// Cells whose physical part is a sliver below 1e-14 h^2 come back empty.
/// `tris`, when given, receives a chordal triangulation for visualization.
std::vector<BulkPoint> bulk_rule_for_cell(const CellInfo& info, const geom::BoundaryModel& bd, int q,
                                          std::vector<DisplayTri>* tris = nullptr);

/// Boundary rule for a cut cell: Gauss points in the curve parameter per
/// piece, weights including |dx/dt|, each point carrying its frame and
/// boundary-region label.
std::vector<BoundaryPoint> boundary_rule_for_cell(const CellInfo& info, const geom::BoundaryModel& bd, int q);

/// Build bulk + boundary rules for all cells and assign every corner to
/// exactly one owning cut cell (lexicographically smallest on ties).
/// Fills per-cell volume fractions and chi_min in the classification and
/// demotes sliver cells to outer.
QuadratureScheme build_quadrature(CellClassification& cls, const EmbeddingGrid& grid, int q_bulk,
                                  int q_boundary);

}  // namespace flexo::mesh
