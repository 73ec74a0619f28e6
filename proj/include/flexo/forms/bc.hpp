#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <unordered_map>

namespace flexo::geom {
struct BoundaryFrame;
}

namespace flexo::forms {

using Eigen::Vector2d;

/// Prescribed boundary data as space functions; the frame pointer is set at
/// boundary quadrature points (null at corners) so that data like the
/// normal derivative of a manufactured field can be formed exactly.
using VectorData = std::function<Vector2d(const Vector2d&, const geom::BoundaryFrame*)>;
using ScalarData = std::function<double(const Vector2d&, const geom::BoundaryFrame*)>;

enum class MechKind { Dirichlet, Neumann };
enum class ElecKind { Dirichlet, Electrode, Neumann };

/// Boundary conditions on one region label. The boundary is partitioned
/// twice mechanically (u/t and v/r) and once electrically (phi/Phi/w);
/// any unspecified region defaults to homogeneous Neumann everywhere.
/// Component masks allow prescribing single components (the complement is
/// homogeneous Neumann).
struct RegionBC {
    MechKind u_kind = MechKind::Neumann;
    std::array<bool, 2> u_mask = {true, true};
    VectorData u_data;  // ubar (Dirichlet) or tbar (Neumann); null = zero

    MechKind v_kind = MechKind::Neumann;
    std::array<bool, 2> v_mask = {true, true};
    VectorData v_data;  // vbar or rbar; null = zero

    ElecKind e_kind = ElecKind::Neumann;
    ScalarData e_data;  // phibar or wbar; null = zero
    int electrode = -1;
};

struct CornerBC {
    bool dirichlet = false;
    VectorData data;  // ubar (Dirichlet) or jbar (Neumann); null = zero
};

struct BCRegionSpec {
    std::unordered_map<int, RegionBC> regions;  // region id -> bc
    std::unordered_map<int, CornerBC> corners;  // corner index -> bc
    RegionBC default_region;                    // homogeneous Neumann
    CornerBC default_corner;                    // homogeneous Neumann
    int n_electrodes = 0;

    const RegionBC& for_region(int id) const {
        auto it = regions.find(id);
        return it == regions.end() ? default_region : it->second;
    }
    const CornerBC& for_corner(int idx) const {
        auto it = corners.find(idx);
        return it == corners.end() ? default_corner : it->second;
    }
    bool has_mech_dirichlet() const {
        for (const auto& [id, bc] : regions)
            if (bc.u_kind == MechKind::Dirichlet && (bc.u_mask[0] || bc.u_mask[1])) return true;
        for (const auto& [id, bc] : corners)
            if (bc.dirichlet) return true;
        return false;
    }
};

inline Vector2d eval_or_zero(const VectorData& f, const Vector2d& x, const geom::BoundaryFrame* fr) {
    return f ? f(x, fr) : Vector2d::Zero();
}
inline double eval_or_zero(const ScalarData& f, const Vector2d& x, const geom::BoundaryFrame* fr) {
    return f ? f(x, fr) : 0.0;
}

}  // namespace flexo::forms
