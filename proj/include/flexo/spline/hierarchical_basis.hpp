#pragma once

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "flexo/spline/uniform_basis.hpp"

namespace flexo::spline {

/// Identifier of a basis function: refinement level and tensor indices.
struct FnKey {
    int level = 0;
    int i = 0;  // index along x
    int j = 0;  // index along y

    bool operator==(const FnKey&) const = default;
};

/// Bivariate tensor-product B-spline basis on one refinement level of a
/// Cartesian box. Level l has cell size h / 2^l; per axis, the parametric
/// coordinate is xi_l = (x - x0) / h_l + 2^l p, so that the two-scale map is
/// the pure dyadic contraction xi_{l+1} = 2 xi_l and the children of
/// function i are {2i, ..., 2i+p+1}.
struct LevelBasis2D {
    int level = 0;
    int degree = 3;
    double x0 = 0, y0 = 0;   // box origin
    double cell = 1;         // cell size at this level
    int ncx = 0, ncy = 0;    // cells per axis at this level
    int offset = 0;          // index offset 2^level * p

    // Index range of functions overlapping the box, per axis:
    // [offset - p, offset + nc - 1].
    int first_index() const { return offset - degree; }
    int last_index_x() const { return offset + ncx - 1; }
    int last_index_y() const { return offset + ncy - 1; }

    double xi_x(double x) const { return (x - x0) / cell + offset; }
    double xi_y(double y) const { return (y - y0) / cell + offset; }

    /// Value of the (i,j) tensor function at (x,y), derivative orders
    /// (dx, dy); the chain rule through the linear cell map divides by
    /// cell^(dx+dy).
    double eval(int i, int j, double x, double y, int dx, int dy) const;
};

/// Hierarchical B-spline basis with parent/child links through the二
/// two-scale relation. Activation follows the refined-cell domains: a
/// function of level l is active when its (box-clipped) support lies inside
/// the level-l refined region but not entirely inside the next one. This
/// keeps the active set linearly independent and polynomial-reproducing.
/// Immutable after construction; refine() returns a new value and all
/// queries are reentrant.
class HierarchicalBasis {
public:
    /// Uniform (single-level) basis over the box [x0, x0+ncx*h] x [y0, y0+ncy*h].
    static HierarchicalBasis make_uniform(int degree, double x0, double y0, double h,
                                          int ncx, int ncy, int max_levels = 4);

    int degree() const { return degree_; }
    int max_levels() const { return max_levels_; }
    int num_levels() const { return static_cast<int>(levels_.size()); }
    const LevelBasis2D& level(int l) const { return levels_[static_cast<size_t>(l)]; }

    double box_x0() const { return levels_[0].x0; }
    double box_y0() const { return levels_[0].y0; }
    double box_x1() const { return levels_[0].x0 + levels_[0].ncx * levels_[0].cell; }
    double box_y1() const { return levels_[0].y0 + levels_[0].ncy * levels_[0].cell; }
    double base_cell() const { return levels_[0].cell; }
    int base_ncx() const { return levels_[0].ncx; }
    int base_ncy() const { return levels_[0].ncy; }

    std::size_t num_functions() const { return fns_.size(); }
    const std::vector<FnKey>& functions() const { return fns_; }
    const FnKey& function(std::size_t id) const { return fns_[id]; }

    bool is_active(const FnKey& k) const;
    /// Dense id of an active function; throws if inactive.
    std::size_t id_of(const FnKey& k) const;

    /// Children keys of a function under the two-scale relation: the
    /// (p+2)^2 functions {2i..2i+p+1} x {2j..2j+p+1} at the next level.
    std::vector<FnKey> children(const FnKey& k) const;

    /// Value / derivative of an active function at a physical point.
    /// Throws if the function is not active or the point is outside the box.
    double eval(const FnKey& k, double x, double y, int dx = 0, int dy = 0) const;

    /// Refine the marked (active) functions: the cells of their supports are
    /// subdivided, which deactivates them, activates their children, and
    /// re-evaluates neighbors against the enlarged refined region.
    /// Admissibility is restored by also refining any coarse function whose
    /// support overlaps an active function two or more levels finer.
    /// Marking an inactive (already refined) function is an error.
    HierarchicalBasis refine(const std::vector<FnKey>& marked) const;

    /// True when cell (cx, cy) of level `lvl` is subdivided; integration
    /// happens on unrefined (leaf) cells only.
    bool cell_refined(int lvl, int cx, int cy) const;

    /// Active functions whose support overlaps the closed cell (cx, cy) at
    /// level `lvl` (levels <= lvl only, which is exhaustive on leaf cells).
    std::vector<std::size_t> functions_on_cell(int lvl, int cx, int cy) const;

    /// Hierarchical coefficients representing the same spline as the given
    /// full level-0 coefficient field, propagated through the two-scale
    /// relation across refined functions. Exact for any level-0 spline, in
    /// particular for polynomials of degree <= p.
    std::vector<double> carry_to_hierarchy(const std::function<double(int, int)>& coeff0) const;

    /// Physical support rectangle of a function (clipped to the box).
    void support(const FnKey& k, double& xa, double& ya, double& xb, double& yb) const;

private:
    using CellSet = std::unordered_set<std::uint64_t>;
    static std::uint64_t pack(int i, int j) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
               static_cast<std::uint32_t>(j);
    }

    void support_cells(const FnKey& k, int& ca, int& cb, int& cc, int& cd) const;
    bool covered_by_next(const FnKey& k) const;  // clipped support inside refined region
    bool inside_level(const FnKey& k) const;     // clipped support inside this level's region
    void subdivide_support(const FnKey& k);
    void rebuild_active();

    int degree_ = 3;
    int max_levels_ = 4;
    std::vector<LevelBasis2D> levels_;
    std::vector<CellSet> refined_;  // per level: subdivided cells
    std::vector<FnKey> fns_;        // active functions, sorted (level, i, j)
    std::unordered_map<std::uint64_t, std::size_t> ids_;
};

}  // namespace flexo::spline
