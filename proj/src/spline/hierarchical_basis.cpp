#include "flexo/spline/hierarchical_basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flexo::spline {

namespace {
// Indices stay non-negative and well below 2^28 at any realistic depth.
std::uint64_t key3(int level, int i, int j) {
    return (static_cast<std::uint64_t>(level) << 56) |
           (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 28) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(j));
}
}  // namespace

double LevelBasis2D::eval(int i, int j, double x, double y, int dx, int dy) const {
    const double bx = eval_translated(degree, xi_x(x) - i, dx);
    if (bx == 0.0) return 0.0;
    const double by = eval_translated(degree, xi_y(y) - j, dy);
    return bx * by / std::pow(cell, dx + dy);
}

HierarchicalBasis HierarchicalBasis::make_uniform(int degree, double x0, double y0, double h,
                                                  int ncx, int ncy, int max_levels) {
    if (degree < 1 || degree > 7) throw std::invalid_argument("HierarchicalBasis: degree out of range");
    if (ncx < 1 || ncy < 1 || h <= 0) throw std::invalid_argument("HierarchicalBasis: bad grid");
    if (max_levels < 1) throw std::invalid_argument("HierarchicalBasis: max_levels must be >= 1");
    HierarchicalBasis b;
    b.degree_ = degree;
    b.max_levels_ = max_levels;
    LevelBasis2D l0;
    l0.level = 0;
    l0.degree = degree;
    l0.x0 = x0;
    l0.y0 = y0;
    l0.cell = h;
    l0.ncx = ncx;
    l0.ncy = ncy;
    l0.offset = degree;
    b.levels_.push_back(l0);
    b.refined_.emplace_back();
    b.rebuild_active();
    return b;
}

void HierarchicalBasis::support_cells(const FnKey& k, int& ca, int& cb, int& cc, int& cd) const {
    // Box-clipped support in level-k cells: [ca, cb] x [cc, cd].
    const LevelBasis2D& L = levels_[static_cast<size_t>(k.level)];
    ca = std::max(0, k.i - L.offset);
    cb = std::min(L.ncx - 1, k.i - L.offset + degree_);
    cc = std::max(0, k.j - L.offset);
    cd = std::min(L.ncy - 1, k.j - L.offset + degree_);
}

bool HierarchicalBasis::covered_by_next(const FnKey& k) const {
    const auto& R = refined_[static_cast<size_t>(k.level)];
    if (R.empty()) return false;
    int ca, cb, cc, cd;
    support_cells(k, ca, cb, cc, cd);
    if (ca > cb || cc > cd) return false;  // support entirely outside the box
    for (int a = ca; a <= cb; ++a)
        for (int b = cc; b <= cd; ++b)
            if (R.count(pack(a, b)) == 0) return false;
    return true;
}

bool HierarchicalBasis::inside_level(const FnKey& k) const {
    if (k.level == 0) return true;  // the whole box is the level-0 region
    const auto& Rprev = refined_[static_cast<size_t>(k.level - 1)];
    int ca, cb, cc, cd;
    support_cells(k, ca, cb, cc, cd);
    if (ca > cb || cc > cd) return false;
    for (int a = ca; a <= cb; ++a)
        for (int b = cc; b <= cd; ++b)
            if (Rprev.count(pack(a >> 1, b >> 1)) == 0) return false;
    return true;
}

void HierarchicalBasis::rebuild_active() {
    fns_.clear();
    ids_.clear();
    for (int l = 0; l < static_cast<int>(levels_.size()); ++l) {
        const LevelBasis2D& L = levels_[static_cast<size_t>(l)];
        std::vector<FnKey> lvl;
        if (l == 0) {
            for (int i = L.first_index(); i <= L.last_index_x(); ++i)
                for (int j = L.first_index(); j <= L.last_index_y(); ++j) {
                    const FnKey k{0, i, j};
                    if (!covered_by_next(k)) lvl.push_back(k);
                }
        } else {
            // Candidates live around the children of refined cells.
            CellSet seen;
            for (std::uint64_t cell : refined_[static_cast<size_t>(l - 1)]) {
                const int cx = static_cast<int>(static_cast<std::int32_t>(cell >> 32));
                const int cy = static_cast<int>(static_cast<std::int32_t>(cell & 0xffffffffu));
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) {
                        const int fx = 2 * cx + a, fy = 2 * cy + b;  // child cell at level l
                        for (int i = L.offset + fx - degree_; i <= L.offset + fx; ++i)
                            for (int j = L.offset + fy - degree_; j <= L.offset + fy; ++j) {
                                if (!seen.insert(pack(i, j)).second) continue;
                                const FnKey k{l, i, j};
                                if (inside_level(k) && !covered_by_next(k)) lvl.push_back(k);
                            }
                    }
            }
        }
        std::sort(lvl.begin(), lvl.end(), [](const FnKey& a, const FnKey& b) {
            return a.i != b.i ? a.i < b.i : a.j < b.j;
        });
        fns_.insert(fns_.end(), lvl.begin(), lvl.end());
    }
    for (std::size_t id = 0; id < fns_.size(); ++id) ids_[key3(fns_[id].level, fns_[id].i, fns_[id].j)] = id;
}

bool HierarchicalBasis::is_active(const FnKey& k) const {
    return ids_.count(key3(k.level, k.i, k.j)) > 0;
}

std::size_t HierarchicalBasis::id_of(const FnKey& k) const {
    auto it = ids_.find(key3(k.level, k.i, k.j));
    if (it == ids_.end()) throw std::invalid_argument("HierarchicalBasis: function not active");
    return it->second;
}

std::vector<FnKey> HierarchicalBasis::children(const FnKey& k) const {
    std::vector<FnKey> out;
    out.reserve(static_cast<size_t>((degree_ + 2) * (degree_ + 2)));
    for (int a = 0; a <= degree_ + 1; ++a)
        for (int b = 0; b <= degree_ + 1; ++b)
            out.push_back(FnKey{k.level + 1, 2 * k.i + a, 2 * k.j + b});
    return out;
}

double HierarchicalBasis::eval(const FnKey& k, double x, double y, int dx, int dy) const {
    if (!is_active(k)) throw std::invalid_argument("HierarchicalBasis::eval: inactive function");
    if (x < box_x0() - 1e-12 || x > box_x1() + 1e-12 || y < box_y0() - 1e-12 || y > box_y1() + 1e-12)
        throw std::invalid_argument("HierarchicalBasis::eval: point outside embedding box");
    return levels_[static_cast<size_t>(k.level)].eval(k.i, k.j, x, y, dx, dy);
}

void HierarchicalBasis::support(const FnKey& k, double& xa, double& ya, double& xb, double& yb) const {
    const LevelBasis2D& L = levels_[static_cast<size_t>(k.level)];
    xa = L.x0 + (k.i - L.offset) * L.cell;
    ya = L.y0 + (k.j - L.offset) * L.cell;
    xb = xa + (degree_ + 1) * L.cell;
    yb = ya + (degree_ + 1) * L.cell;
    xa = std::max(xa, box_x0());
    ya = std::max(ya, box_y0());
    xb = std::min(xb, box_x1());
    yb = std::min(yb, box_y1());
}

void HierarchicalBasis::subdivide_support(const FnKey& k) {
    if (k.level + 1 >= max_levels_)
        throw std::invalid_argument("HierarchicalBasis::refine: maximum refinement depth reached");
    while (static_cast<int>(levels_.size()) <= k.level + 1) {
        const LevelBasis2D& prev = levels_.back();
        LevelBasis2D nl = prev;
        nl.level = prev.level + 1;
        nl.cell = prev.cell / 2;
        nl.ncx = prev.ncx * 2;
        nl.ncy = prev.ncy * 2;
        nl.offset = prev.offset * 2;
        levels_.push_back(nl);
        refined_.emplace_back();
    }
    int ca, cb, cc, cd;
    support_cells(k, ca, cb, cc, cd);
    for (int a = ca; a <= cb; ++a)
        for (int b = cc; b <= cd; ++b) refined_[static_cast<size_t>(k.level)].insert(pack(a, b));
}

HierarchicalBasis HierarchicalBasis::refine(const std::vector<FnKey>& marked) const {
    for (const FnKey& k : marked)
        if (!is_active(k)) throw std::invalid_argument("HierarchicalBasis::refine: marked function is not active");
    HierarchicalBasis nb = *this;
    for (const FnKey& k : marked) nb.subdivide_support(k);
    nb.rebuild_active();

    // Admissibility: no active function may overlap actives two levels finer.
    bool changed = true;
    while (changed) {
        changed = false;
        for (const FnKey& k : std::vector<FnKey>(nb.fns_)) {
            if (!nb.is_active(k)) continue;
            if (k.level + 1 >= static_cast<int>(nb.levels_.size())) continue;
            // The cells of R_{l+1} host level l+2 functions; overlap with
            // the support of a level-l function violates admissibility.
            int ca, cb, cc, cd;
            nb.support_cells(k, ca, cb, cc, cd);
            bool overlaps = false;
            for (std::uint64_t cell : nb.refined_[static_cast<size_t>(k.level + 1)]) {
                const int cx = static_cast<int>(static_cast<std::int32_t>(cell >> 32));
                const int cy = static_cast<int>(static_cast<std::int32_t>(cell & 0xffffffffu));
                if ((cx >> 1) >= ca && (cx >> 1) <= cb && (cy >> 1) >= cc && (cy >> 1) <= cd) {
                    overlaps = true;
                    break;
                }
            }
            if (overlaps) {
                nb.subdivide_support(k);
                nb.rebuild_active();
                changed = true;
            }
        }
    }
    return nb;
}

bool HierarchicalBasis::cell_refined(int lvl, int cx, int cy) const {
    if (lvl >= static_cast<int>(refined_.size())) return false;
    return refined_[static_cast<size_t>(lvl)].count(pack(cx, cy)) > 0;
}

std::vector<std::size_t> HierarchicalBasis::functions_on_cell(int lvl, int cx, int cy) const {
    std::vector<std::size_t> out;
    for (int l = 0; l <= lvl && l < static_cast<int>(levels_.size()); ++l) {
        const int shift = lvl - l;
        const int ca = cx >> shift, cb = cy >> shift;
        const int base = levels_[static_cast<size_t>(l)].offset;
        for (int i = base + ca - degree_; i <= base + ca; ++i) {
            for (int j = base + cb - degree_; j <= base + cb; ++j) {
                auto it = ids_.find(key3(l, i, j));
                if (it != ids_.end()) out.push_back(it->second);
            }
        }
    }
    return out;
}

std::vector<double> HierarchicalBasis::carry_to_hierarchy(const std::function<double(int, int)>& coeff0) const {
    const std::vector<double> s = two_scale_coeffs(degree_);
    std::vector<std::unordered_map<std::uint64_t, double>> carry(levels_.size());
    const LevelBasis2D& L0 = levels_[0];
    for (int i = L0.first_index(); i <= L0.last_index_x(); ++i)
        for (int j = L0.first_index(); j <= L0.last_index_y(); ++j) carry[0][pack(i, j)] = coeff0(i, j);

    std::vector<double> out(fns_.size(), 0.0);
    for (int l = 0; l < static_cast<int>(levels_.size()); ++l) {
        for (const auto& [key, c] : carry[static_cast<size_t>(l)]) {
            const int i = static_cast<int>(static_cast<std::int32_t>(key >> 32));
            const int j = static_cast<int>(static_cast<std::int32_t>(key & 0xffffffffu));
            const FnKey k{l, i, j};
            auto it = ids_.find(key3(l, i, j));
            if (it != ids_.end()) {
                out[it->second] += c;
            } else if (l + 1 < static_cast<int>(levels_.size()) && covered_by_next(k)) {
                for (int a = 0; a <= degree_ + 1; ++a)
                    for (int b = 0; b <= degree_ + 1; ++b)
                        carry[static_cast<size_t>(l) + 1][pack(2 * i + a, 2 * j + b)] +=
                            c * s[static_cast<size_t>(a)] * s[static_cast<size_t>(b)];
            }
            // Remaining functions carry no representable content on the box.
        }
    }
    return out;
}

}  // namespace flexo::spline
