#include "flexo/sys/dofmap.hpp"

namespace flexo::sys {

DofMap::DofMap(const spline::HierarchicalBasis& basis, const mesh::CellClassification& cls,
               int n_electrodes)
    : n_electrodes_(n_electrodes) {
    std::vector<bool> keep(basis.num_functions(), false);
    for (const mesh::CellInfo& info : cls.cells) {
        if (info.tag == mesh::CellTag::Outer) continue;
        for (std::size_t id : basis.functions_on_cell(info.cell.level, info.cell.cx, info.cell.cy))
            keep[id] = true;
    }
    retained_of_.assign(basis.num_functions(), -1);
    for (std::size_t id = 0; id < keep.size(); ++id) {
        if (keep[id]) {
            retained_of_[id] = n_retained_++;
            fn_of_.push_back(id);
        }
    }
}

}  // namespace flexo::sys
