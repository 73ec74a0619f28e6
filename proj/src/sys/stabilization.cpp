#include "flexo/sys/stabilization.hpp"

#include <array>
#include <cmath>
#include <map>

namespace flexo::sys {

namespace {

// Lagrange extrapolation weights in index space over the block {b, ..., b+p},
// evaluated at index i. Exact for the B-spline coefficient sequences of all
// polynomials of degree <= p.
std::vector<double> lagrange_weights(int i, int b, int p) {
    std::vector<double> w(static_cast<size_t>(p) + 1, 1.0);
    for (int j = 0; j <= p; ++j) {
        for (int k = 0; k <= p; ++k) {
            if (k == j) continue;
            w[static_cast<size_t>(j)] *= static_cast<double>(i - (b + k)) / static_cast<double>(j - k);
        }
    }
    return w;
}

}  // namespace

Eigen::SparseMatrix<double> StabilizationMap::dof_map(const DofMap& dofs) const {
    const int R = n_raw, S = n_stable, nE = dofs.n_electrodes();
    Eigen::SparseMatrix<double> M(3 * R + nE, 3 * S + nE);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(F.nonZeros()) * 3 + static_cast<size_t>(nE));
    for (int k = 0; k < F.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(F, k); it; ++it) {
            const int r = static_cast<int>(it.row());
            const int s = static_cast<int>(it.col());
            const double v = it.value();
            trip.emplace_back(2 * r, 2 * s, v);
            trip.emplace_back(2 * r + 1, 2 * s + 1, v);
            trip.emplace_back(2 * R + r, 2 * S + s, v);
        }
    }
    for (int e = 0; e < nE; ++e) trip.emplace_back(3 * R + e, 3 * S + e, 1.0);
    M.setFromTriplets(trip.begin(), trip.end());
    return M;
}

StabilizationMap build_stabilization(const spline::HierarchicalBasis& basis, const DofMap& dofs,
                                     const mesh::CellClassification& cls, StabMode mode,
                                     double critical_threshold) {
    StabilizationMap out;
    out.mode = mode;
    const int R = dofs.n_retained();
    out.n_raw = R;

    // Inside-domain support fraction per retained function.
    out.support_fraction.assign(static_cast<size_t>(R), 0.0);
    for (const mesh::CellInfo& info : cls.cells) {
        if (info.tag == mesh::CellTag::Outer) continue;
        const double area = info.cell.size() * info.cell.size() * info.chi;
        for (std::size_t id : basis.functions_on_cell(info.cell.level, info.cell.cx, info.cell.cy)) {
            const int r = dofs.retained_of(id);
            if (r >= 0) out.support_fraction[static_cast<size_t>(r)] += area;
        }
    }
    for (int r = 0; r < R; ++r) {
        double xa, ya, xb, yb;
        basis.support(basis.function(dofs.fn_of(r)), xa, ya, xb, yb);
        const double denom = (xb - xa) * (yb - ya);
        if (denom > 0) out.support_fraction[static_cast<size_t>(r)] /= denom;
    }

    std::vector<Eigen::Triplet<double>> trip;
    out.stable_of_retained.assign(static_cast<size_t>(R), -1);

    if (mode != StabMode::ExtendedBsplines) {
        out.n_stable = R;
        out.F.resize(R, R);
        out.F.setIdentity();
        for (int r = 0; r < R; ++r) out.stable_of_retained[static_cast<size_t>(r)] = r;
        return out;
    }

    const int p = basis.degree();
    std::vector<bool> critical(static_cast<size_t>(R), false);
    for (int r = 0; r < R; ++r)
        critical[static_cast<size_t>(r)] = out.support_fraction[static_cast<size_t>(r)] < critical_threshold;

    // Kept functions become the stabilized unknowns, in retained order.
    int S = 0;
    for (int r = 0; r < R; ++r)
        if (!critical[static_cast<size_t>(r)]) out.stable_of_retained[static_cast<size_t>(r)] = S++;

    auto kept_at = [&](int level, int i, int j) -> int {
        const spline::FnKey k{level, i, j};
        if (!basis.is_active(k)) return -1;
        const int r = dofs.retained_of(basis.id_of(k));
        if (r < 0 || critical[static_cast<size_t>(r)]) return -1;
        return out.stable_of_retained[static_cast<size_t>(r)];
    };

    for (int r = 0; r < R; ++r) {
        if (!critical[static_cast<size_t>(r)]) {
            trip.emplace_back(r, out.stable_of_retained[static_cast<size_t>(r)], 1.0);
            continue;
        }
        const spline::FnKey key = basis.function(dofs.fn_of(r));
        // Nearest fully-kept (p+1)^2 anchor block at the same level.
        const int win = 2 * (p + 1);
        int best_bi = 0, best_bj = 0;
        double best_d = 1e300;
        bool found = false;
        for (int bi = key.i - win; bi <= key.i + win; ++bi) {
            for (int bj = key.j - win; bj <= key.j + win; ++bj) {
                bool all = true;
                for (int a = 0; a <= p && all; ++a)
                    for (int b = 0; b <= p && all; ++b)
                        if (kept_at(key.level, bi + a, bj + b) < 0) all = false;
                if (!all) continue;
                const double dx = bi + 0.5 * p - key.i, dy = bj + 0.5 * p - key.j;
                const double d = std::max(std::abs(dx), std::abs(dy)) * 1024 + std::abs(dx) + std::abs(dy);
                if (d < best_d - 1e-12) {
                    best_d = d;
                    best_bi = bi;
                    best_bj = bj;
                    found = true;
                }
            }
        }
        if (!found) {
            // No anchor neighborhood; keep the function as an unknown.
            out.stable_of_retained[static_cast<size_t>(r)] = S++;
            trip.emplace_back(r, out.stable_of_retained[static_cast<size_t>(r)], 1.0);
            out.log.push_back("extended B-splines: no interior anchor for function (level " +
                              std::to_string(key.level) + ", " + std::to_string(key.i) + "," +
                              std::to_string(key.j) + "); kept with diagonal scaling");
            continue;
        }
        const auto wx = lagrange_weights(key.i, best_bi, p);
        const auto wy = lagrange_weights(key.j, best_bj, p);
        for (int a = 0; a <= p; ++a)
            for (int b = 0; b <= p; ++b) {
                const int s = kept_at(key.level, best_bi + a, best_bj + b);
                const double v = wx[static_cast<size_t>(a)] * wy[static_cast<size_t>(b)];
                if (std::abs(v) > 1e-300) trip.emplace_back(r, s, v);
            }
    }

    out.n_stable = S;
    out.F.resize(R, S);
    out.F.setFromTriplets(trip.begin(), trip.end());
    return out;
}

}  // namespace flexo::sys
