#include "flexo/sys/penalty.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "flexo/forms/local_blocks.hpp"
#include "flexo/sys/assemble.hpp"

namespace flexo::sys {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// Largest generalized eigenvalue of B x = lambda V x restricted to the
// numerical range of V. Returns false when B carries energy on the null
// space of V (no finite bound exists).
bool range_gev_max(const MatrixXd& B, const MatrixXd& V, double& K) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> ev(V);
    const VectorXd d = ev.eigenvalues();
    const double dmax = d.maxCoeff();
    if (!(dmax > 0)) return false;
    const double thr = 1e-12 * dmax;
    std::vector<int> keep, null;
    for (int i = 0; i < d.size(); ++i) (d(i) > thr ? keep : null).push_back(i);

    const double bscale = B.cwiseAbs().maxCoeff();
    if (bscale == 0) {
        K = 0;
        return true;
    }
    for (int i : null) {
        const VectorXd z = ev.eigenvectors().col(i);
        if (z.dot(B * z) > 1e-10 * bscale) return false;
    }
    MatrixXd Q(V.rows(), static_cast<Eigen::Index>(keep.size()));
    VectorXd ds(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) {
        Q.col(static_cast<Eigen::Index>(k)) = ev.eigenvectors().col(keep[k]);
        ds(static_cast<Eigen::Index>(k)) = 1.0 / std::sqrt(d(keep[k]));
    }
    const MatrixXd Bt = ds.asDiagonal() * (Q.transpose() * B * Q) * ds.asDiagonal();
    Eigen::SelfAdjointEigenSolver<MatrixXd> eb(Bt, Eigen::EigenvaluesOnly);
    K = std::max(0.0, eb.eigenvalues().maxCoeff());
    return true;
}

}  // namespace

PenaltyBounds penalty_bounds_for_cell(const mesh::CellInfo& info, const mesh::CellQuadrature& cq,
                                      const mesh::EmbeddingGrid& grid, const forms::BCRegionSpec& bc,
                                      const mat::MaterialSet& material, double alpha1, double alpha2) {
    PenaltyBounds out;
    const auto& basis = grid.basis();
    const auto fns = basis.functions_on_cell(info.cell.level, info.cell.cx, info.cell.cy);
    const int n = static_cast<int>(fns.size());
    const int nu = 2 * n;

    MatrixXd V = MatrixXd::Zero(nu, nu);
    MatrixXd Bu = MatrixXd::Zero(nu, nu), Bv = MatrixXd::Zero(nu, nu), Bcu = MatrixXd::Zero(nu, nu);

    std::vector<double> scratch[10];
    forms::PointBasis pb;

    // Cell mechanical energy (uncoupled: the coupling physics play no role
    // in the coercivity analysis).
    for (const mesh::BulkPoint& q : cq.bulk) {
        eval_point_basis(basis, fns, q.x, 5, scratch, pb);
        forms::LocalBlock lb;
        lb.init(n);
        forms::add_bulk_point(pb, material, Eigen::Vector2d::Zero(), 0.0, q.w, lb);
        V += lb.K.topLeftCorner(nu, nu);
    }

    for (const mesh::BoundaryPoint& q : cq.boundary) {
        const forms::RegionBC& rbc = bc.for_region(q.region_id);
        const bool du = rbc.u_kind == forms::MechKind::Dirichlet;
        const bool dv = rbc.v_kind == forms::MechKind::Dirichlet;
        if (!du && !dv) continue;
        eval_point_basis(basis, fns, q.x, 9, scratch, pb);
        const forms::BoundaryDofOps ops = forms::boundary_dof_ops(pb, q.frame, material);
        for (int i = 0; i < 2; ++i) {
            if (du && rbc.u_mask[static_cast<size_t>(i)]) {
                out.has_u = true;
                Bu.noalias() +=
                    q.w * ops.t.row(i).head(nu).transpose() * ops.t.row(i).head(nu);
            }
            if (dv && rbc.v_mask[static_cast<size_t>(i)]) {
                out.has_v = true;
                Bv.noalias() +=
                    q.w * ops.r.row(i).head(nu).transpose() * ops.r.row(i).head(nu);
            }
        }
    }

    for (int corner_idx : cq.corners) {
        if (!bc.for_corner(corner_idx).dirichlet) continue;
        const geom::Corner& c = grid.boundary().corners()[static_cast<size_t>(corner_idx)];
        eval_point_basis(basis, fns, c.x, 5, scratch, pb);
        const forms::CornerDofOps ops = forms::corner_dof_ops(pb, c, material);
        out.has_cu = true;
        for (int i = 0; i < 2; ++i)
            Bcu.noalias() += ops.j.row(i).head(nu).transpose() * ops.j.row(i).head(nu);
    }

    if (!out.has_u && !out.has_v && !out.has_cu) return out;  // no constraint

    if (out.has_u) out.unbounded = out.unbounded || !range_gev_max(Bu, V, out.Ku);
    if (out.has_v) out.unbounded = out.unbounded || !range_gev_max(Bv, V, out.Kv);
    if (out.has_cu) out.unbounded = out.unbounded || !range_gev_max(Bcu, V, out.Kcu);
    if (out.unbounded) return out;

    // Bound vector from the alpha matrix, rows and columns of absent
    // Dirichlet kinds removed. With a = (1, 1/alpha1, 1/alpha2) the matrix
    // entry is a_r / a_c.
    const double a[3] = {1.0, 1.0 / alpha1, 1.0 / alpha2};
    const bool present[3] = {out.has_u, out.has_v, out.has_cu};
    const double K[3] = {out.Ku, out.Kv, out.Kcu};
    double bound[3] = {0, 0, 0};
    for (int r = 0; r < 3; ++r) {
        if (!present[r]) continue;
        for (int c = 0; c < 3; ++c)
            if (present[c]) bound[r] += a[r] / a[c] * K[c];
    }
    out.bound_u = bound[0];
    out.bound_v = bound[1];
    out.bound_cu = bound[2];
    return out;
}

}  // namespace flexo::sys
