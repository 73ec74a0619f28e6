#include "flexo/sys/assemble.hpp"

#include <cmath>
#include <thread>

namespace flexo::sys {

using Eigen::Vector2d;

Eigen::SparseMatrix<double> AssembledSystem::block(int r0, int r1) const {
    const int m = r1 - r0;
    Eigen::SparseMatrix<double> B(m, m);
    std::vector<Eigen::Triplet<double>> trip;
    for (int k = 0; k < A.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
            if (it.row() >= r0 && it.row() < r1 && it.col() >= r0 && it.col() < r1)
                trip.emplace_back(static_cast<int>(it.row()) - r0, static_cast<int>(it.col()) - r0, it.value());
    B.setFromTriplets(trip.begin(), trip.end());
    return B;
}

Eigen::VectorXd AssembledSystem::expand(const Eigen::VectorXd& x) const {
    Eigen::VectorXd xs = x;
    if (diag_scale.size() > 0) xs = diag_scale.asDiagonal() * xs;
    return expand_map * xs;
}

void eval_point_basis(const spline::HierarchicalBasis& basis, const std::vector<std::size_t>& fns,
                      const Eigen::Vector2d& x, int max_slot, std::vector<double> scratch[10],
                      forms::PointBasis& pb) {
    const int n = static_cast<int>(fns.size());
    for (int s = 0; s <= max_slot; ++s) {
        scratch[s].resize(static_cast<size_t>(n));
        pb.d[s] = scratch[s].data();
    }
    pb.n = n;
    for (int f = 0; f < n; ++f) {
        const spline::FnKey key = basis.function(fns[static_cast<size_t>(f)]);
        const spline::LevelBasis2D& L = basis.level(key.level);
        double ax[spline::kMaxDeriv + 1], ay[spline::kMaxDeriv + 1];
        spline::eval_translated_all(basis.degree(), L.xi_x(x.x()) - key.i, ax);
        spline::eval_translated_all(basis.degree(), L.xi_y(x.y()) - key.j, ay);
        const double ih = 1.0 / L.cell;
        const double ih2 = ih * ih, ih3 = ih2 * ih;
        scratch[0][static_cast<size_t>(f)] = ax[0] * ay[0];
        if (max_slot >= 1) scratch[1][static_cast<size_t>(f)] = ax[1] * ay[0] * ih;
        if (max_slot >= 2) scratch[2][static_cast<size_t>(f)] = ax[0] * ay[1] * ih;
        if (max_slot >= 3) scratch[3][static_cast<size_t>(f)] = ax[2] * ay[0] * ih2;
        if (max_slot >= 4) scratch[4][static_cast<size_t>(f)] = ax[1] * ay[1] * ih2;
        if (max_slot >= 5) scratch[5][static_cast<size_t>(f)] = ax[0] * ay[2] * ih2;
        if (max_slot >= 6) scratch[6][static_cast<size_t>(f)] = ax[3] * ay[0] * ih3;
        if (max_slot >= 7) scratch[7][static_cast<size_t>(f)] = ax[2] * ay[1] * ih3;
        if (max_slot >= 8) scratch[8][static_cast<size_t>(f)] = ax[1] * ay[2] * ih3;
        if (max_slot >= 9) scratch[9][static_cast<size_t>(f)] = ax[0] * ay[3] * ih3;
    }
}

namespace {

struct CellContribution {
    std::vector<std::size_t> fns;
    forms::LocalBlock block;
    bool used = false;
};

void compute_cell(const mesh::EmbeddingGrid& grid, const mesh::CellClassification& cls,
                  const mesh::QuadratureScheme& quad, const forms::BCRegionSpec& bc,
                  const mat::MaterialSet& material, const PenaltyFn& penalties, const LoadFns& loads,
                  std::size_t ci, CellContribution& out) {
    const mesh::CellInfo& info = cls.cells[ci];
    if (info.tag == mesh::CellTag::Outer) return;
    const mesh::CellQuadrature& cq = quad.cells[ci];
    const auto& basis = grid.basis();

    out.fns = basis.functions_on_cell(info.cell.level, info.cell.cx, info.cell.cy);
    const int n = static_cast<int>(out.fns.size());
    out.block.init(n);
    out.used = true;

    std::vector<double> scratch[10];
    forms::PointBasis pb;

    for (const mesh::BulkPoint& q : cq.bulk) {
        eval_point_basis(basis, out.fns, q.x, 5, scratch, pb);
        const Vector2d bf = loads.body_force ? loads.body_force(q.x) : Vector2d::Zero();
        const double fc = loads.free_charge ? loads.free_charge(q.x) : 0.0;
        forms::add_bulk_point(pb, material, bf, fc, q.w, out.block);
    }

    if (!cq.boundary.empty() || !cq.corners.empty()) {
        const forms::PenaltySet beta = penalties(ci, info);
        for (const mesh::BoundaryPoint& q : cq.boundary) {
            eval_point_basis(basis, out.fns, q.x, 9, scratch, pb);
            forms::add_boundary_point(pb, q.frame, bc.for_region(q.region_id), beta, material, q.w,
                                      out.block);
        }
        for (int corner_idx : cq.corners) {
            const geom::Corner& c = grid.boundary().corners()[static_cast<size_t>(corner_idx)];
            eval_point_basis(basis, out.fns, c.x, 5, scratch, pb);
            forms::add_corner_point(pb, c, bc.for_corner(corner_idx), beta, material, out.block);
        }
    }
}

}  // namespace

AssembledSystem assemble(const mesh::EmbeddingGrid& grid, const mesh::CellClassification& cls,
                         const mesh::QuadratureScheme& quad, const DofMap& dofs,
                         const StabilizationMap& stab, const forms::BCRegionSpec& bc,
                         const mat::MaterialSet& material, const PenaltyFn& penalties,
                         const LoadFns& loads, int threads) {
    const std::size_t ncells = cls.cells.size();
    std::vector<CellContribution> contrib(ncells);

    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t ci = begin; ci < end; ++ci)
            compute_cell(grid, cls, quad, bc, material, penalties, loads, ci, contrib[ci]);
    };
    if (threads <= 1) {
        worker(0, ncells);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (ncells + static_cast<size_t>(threads) - 1) / static_cast<size_t>(threads);
        for (int t = 0; t < threads; ++t) {
            const std::size_t b = static_cast<size_t>(t) * chunk;
            const std::size_t e = std::min(ncells, b + chunk);
            if (b < e) pool.emplace_back(worker, b, e);
        }
        for (auto& th : pool) th.join();
    }

    // Deterministic scatter in cell order, independent of the thread count.
    const int R = dofs.n_retained();
    const int Nraw = dofs.n_dofs();
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd braw = Eigen::VectorXd::Zero(Nraw);
    for (std::size_t ci = 0; ci < ncells; ++ci) {
        const CellContribution& c = contrib[ci];
        if (!c.used) continue;
        const int n = static_cast<int>(c.fns.size());
        std::vector<int> gdof(static_cast<size_t>(3 * n));
        for (int f = 0; f < n; ++f) {
            const int r = dofs.retained_of(c.fns[static_cast<size_t>(f)]);
            gdof[static_cast<size_t>(2 * f)] = dofs.u_dof(r, 0);
            gdof[static_cast<size_t>(2 * f + 1)] = dofs.u_dof(r, 1);
            gdof[static_cast<size_t>(2 * n + f)] = dofs.phi_dof(r);
        }
        for (int a = 0; a < 3 * n; ++a) {
            for (int bcol = 0; bcol < 3 * n; ++bcol) {
                const double v = c.block.K(a, bcol);
                if (v != 0.0) trip.emplace_back(gdof[static_cast<size_t>(a)], gdof[static_cast<size_t>(bcol)], v);
            }
            braw(gdof[static_cast<size_t>(a)]) += c.block.F(a);
        }
        for (const auto& [e, col] : c.block.electrode) {
            const int edof = dofs.electrode_dof(e);
            for (int a = 0; a < 3 * n; ++a) {
                const double v = col(a);
                if (v != 0.0) {
                    trip.emplace_back(gdof[static_cast<size_t>(a)], edof, v);
                    trip.emplace_back(edof, gdof[static_cast<size_t>(a)], v);
                }
            }
        }
    }

    Eigen::SparseMatrix<double> Kraw(Nraw, Nraw);
    Kraw.setFromTriplets(trip.begin(), trip.end());

    AssembledSystem sys;
    sys.n_stable = stab.n_stable;
    sys.n_electrodes = dofs.n_electrodes();
    sys.expand_map = stab.dof_map(dofs);
    sys.A = sys.expand_map.transpose() * Kraw * sys.expand_map;
    sys.b = sys.expand_map.transpose() * braw;
    sys.warnings = quad.warnings;
    for (const std::string& s : stab.log) sys.warnings.push_back(s);

    if (stab.mode == StabMode::DiagonalScaling) {
        Eigen::VectorXd d(sys.A.rows());
        double dmax = 0;
        for (int i = 0; i < sys.A.rows(); ++i) dmax = std::max(dmax, std::abs(sys.A.coeff(i, i)));
        for (int i = 0; i < sys.A.rows(); ++i) {
            const double di = std::abs(sys.A.coeff(i, i));
            d(i) = (di > 1e-300 && di > 1e-30 * dmax) ? 1.0 / std::sqrt(di) : 1.0;
        }
        sys.A = d.asDiagonal() * sys.A * d.asDiagonal();
        sys.b = d.asDiagonal() * sys.b;
        sys.diag_scale = d;
    }

    if (!bc.has_mech_dirichlet())
        sys.warnings.push_back("no mechanical Dirichlet data anywhere: system may be singular (rigid modes)");
    return sys;
}

}  // namespace flexo::sys
