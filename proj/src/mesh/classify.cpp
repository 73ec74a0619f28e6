#include "flexo/mesh/classify.hpp"

#include <stdexcept>

namespace flexo::mesh {

std::size_t CellClassification::count(CellTag t) const {
    std::size_t n = 0;
    for (const CellInfo& c : cells)
        if (c.tag == t) ++n;
    return n;
}

CellClassification classify_cells(const EmbeddingGrid& grid) {
    const geom::BoundaryModel& bd = grid.boundary();
    CellClassification out;
    out.cells.reserve(grid.leaves().size());
    for (const LeafCell& leaf : grid.leaves()) {
        CellInfo info;
        info.cell = leaf;
        info.pieces = bd.pieces_in_box(leaf.lo, leaf.hi);
        if (!info.pieces.empty()) {
            info.tag = CellTag::Cut;
        } else {
            const Vector2d c = 0.5 * (leaf.lo + leaf.hi);
            const auto pc = bd.classify(c);
            if (pc == geom::PointClass::OnBoundary) {
                // Center grazes the boundary but no piece was found; treat
                // as cut so the quadrature stage decides.
                info.tag = CellTag::Cut;
            } else {
                info.tag = (pc == geom::PointClass::Inside) ? CellTag::Inner : CellTag::Outer;
                info.chi = (info.tag == CellTag::Inner) ? 1.0 : 0.0;
            }
        }
        out.cells.push_back(std::move(info));
    }
    return out;
}

}  // namespace flexo::mesh
