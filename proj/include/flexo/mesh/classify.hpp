#pragma once

#include <vector>

#include "flexo/mesh/grid.hpp"

namespace flexo::mesh {

enum class CellTag { Inner, Cut, Outer };

struct CellInfo {
    LeafCell cell;
    CellTag tag = CellTag::Outer;
    std::vector<geom::CurvePiece> pieces;  // boundary portions inside (cut cells)
    double chi = 0.0;                      // |cell ∩ Ω| / |cell|, filled with the quadrature
};

struct CellClassification {
    std::vector<CellInfo> cells;  // parallel to grid.leaves()
    double chi_min = 1.0;         // over cut cells, after quadrature

    std::size_t count(CellTag t) const;
};

/// Classify every leaf as inner, cut or outer. A cell is cut whenever a
/// boundary portion lies inside it, regardless of vertex containment.
CellClassification classify_cells(const EmbeddingGrid& grid);

}  // namespace flexo::mesh
