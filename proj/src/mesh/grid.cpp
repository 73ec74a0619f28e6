#include "flexo/mesh/grid.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace flexo::mesh {

EmbeddingGrid::EmbeddingGrid(const spline::HierarchicalBasis& basis, const geom::BoundaryModel& boundary)
    : basis_(&basis), boundary_(&boundary) {
    Vector2d blo, bhi;
    boundary.bbox(blo, bhi);
    if (blo.x() <= basis.box_x0() || blo.y() <= basis.box_y0() || bhi.x() >= basis.box_x1() ||
        bhi.y() >= basis.box_y1())
        throw std::invalid_argument("EmbeddingGrid: boundary touches or leaves the grid box (margin violated)");

    // Depth-first subdivision, children visited in row-major order so the
    // leaf enumeration is deterministic.
    struct Item {
        int level, cx, cy;
    };
    std::vector<Item> stack;
    for (int cy = basis.base_ncy() - 1; cy >= 0; --cy)
        for (int cx = basis.base_ncx() - 1; cx >= 0; --cx) stack.push_back({0, cx, cy});
    while (!stack.empty()) {
        const Item it = stack.back();
        stack.pop_back();
        if (basis.cell_refined(it.level, it.cx, it.cy)) {
            for (int b = 1; b >= 0; --b)
                for (int a = 1; a >= 0; --a) stack.push_back({it.level + 1, 2 * it.cx + a, 2 * it.cy + b});
            continue;
        }
        LeafCell leaf;
        leaf.level = it.level;
        leaf.cx = it.cx;
        leaf.cy = it.cy;
        const double h = basis.base_cell() / (1 << it.level);
        leaf.lo = Vector2d(basis.box_x0() + it.cx * h, basis.box_y0() + it.cy * h);
        leaf.hi = leaf.lo + Vector2d(h, h);
        leaves_.push_back(leaf);
    }

    // Level-0 bucket index for point location.
    buckets_.assign(static_cast<size_t>(basis.base_ncx() * basis.base_ncy()), {});
    for (std::size_t i = 0; i < leaves_.size(); ++i) {
        const LeafCell& c = leaves_[i];
        const int b0x = c.cx >> c.level, b0y = c.cy >> c.level;
        buckets_[static_cast<size_t>(b0y * basis.base_ncx() + b0x)].push_back(static_cast<int>(i));
    }
}

int EmbeddingGrid::leaf_containing(const Vector2d& x) const {
    const double eps = 1e-12 * basis_->base_cell();
    if (x.x() < basis_->box_x0() - eps || x.x() > basis_->box_x1() + eps || x.y() < basis_->box_y0() - eps ||
        x.y() > basis_->box_y1() + eps)
        return -1;
    const double h0 = basis_->base_cell();
    const int bx = std::clamp(static_cast<int>((x.x() - basis_->box_x0()) / h0), 0, basis_->base_ncx() - 1);
    const int by = std::clamp(static_cast<int>((x.y() - basis_->box_y0()) / h0), 0, basis_->base_ncy() - 1);
    int best = -1;
    auto consider = [&](int b) {
        for (int li : buckets_[static_cast<size_t>(b)]) {
            const LeafCell& c = leaves_[static_cast<size_t>(li)];
            if (x.x() >= c.lo.x() - eps && x.x() <= c.hi.x() + eps && x.y() >= c.lo.y() - eps &&
                x.y() <= c.hi.y() + eps) {
                if (best < 0) {
                    best = li;
                } else {
                    const LeafCell& o = leaves_[static_cast<size_t>(best)];
                    const auto key = [](const LeafCell& k) { return std::array<int, 3>{k.level, k.cx, k.cy}; };
                    if (key(c) < key(o)) best = li;
                }
            }
        }
    };
    // The point may sit on a bucket edge; scan the 3x3 neighborhood.
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
            const int nx = bx + dx, ny = by + dy;
            if (nx >= 0 && nx < basis_->base_ncx() && ny >= 0 && ny < basis_->base_ncy())
                consider(ny * basis_->base_ncx() + nx);
        }
    return best;
}

}  // namespace flexo::mesh
