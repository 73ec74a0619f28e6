#include "flexo/forms/local_blocks.hpp"

namespace flexo::forms {

namespace {

// Symmetric third-derivative lookup: slot of d^3 B / dx^a dy^(3-a) within
// PointBasis (xxx, xxy, xyy, yyy at 6..9).
inline double third(const PointBasis& pb, int f, int i, int j, int k) {
    const int ny = (i == 1) + (j == 1) + (k == 1);
    return pb.d[6 + ny][f];
}
inline double second(const PointBasis& pb, int f, int i, int j) {
    const int ny = (i == 1) + (j == 1);
    return pb.d[3 + ny][f];
}
inline double first(const PointBasis& pb, int f, int i) { return pb.d[1 + i][f]; }

// Fluxes generated by one displacement dof (function f, component d).
FluxState flux_of_u_dof(const PointBasis& pb, int f, int dcomp, const mat::MaterialSet& m,
                        bool with_gradient) {
    Matrix2d eps = Matrix2d::Zero();
    Tensor3 geps;
    Tensor4 g2eps;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            eps(i, j) = 0.5 * ((i == dcomp ? first(pb, f, j) : 0.0) + (j == dcomp ? first(pb, f, i) : 0.0));
            for (int k = 0; k < 2; ++k) {
                geps(i, j, k) =
                    0.5 * ((i == dcomp ? second(pb, f, j, k) : 0.0) + (j == dcomp ? second(pb, f, i, k) : 0.0));
                if (with_gradient)
                    for (int q = 0; q < 2; ++q)
                        g2eps(i, j, k, q) = 0.5 * ((i == dcomp ? third(pb, f, j, k, q) : 0.0) +
                                                   (j == dcomp ? third(pb, f, i, k, q) : 0.0));
            }
        }
    FluxState fs;
    fs.sigma_hat = stress(eps, Vector2d::Zero(), m);
    fs.sigma_tilde = double_stress(geps, Vector2d::Zero(), m);
    fs.D_hat = electric_displacement(eps, geps, Vector2d::Zero(), m);
    if (with_gradient) fs.grad_sigma_tilde = double_stress_gradient(g2eps, Matrix2d::Zero(), m);
    return fs;
}

// Fluxes generated by one potential dof.
FluxState flux_of_phi_dof(const PointBasis& pb, int f, const mat::MaterialSet& m, bool with_gradient) {
    const Vector2d E(-first(pb, f, 0), -first(pb, f, 1));
    Matrix2d gE;
    gE << -second(pb, f, 0, 0), -second(pb, f, 0, 1), -second(pb, f, 1, 0), -second(pb, f, 1, 1);
    FluxState fs;
    fs.sigma_hat = stress(Matrix2d::Zero(), E, m);
    fs.sigma_tilde = double_stress(Tensor3{}, E, m);
    fs.D_hat = m.kappa * E;
    if (with_gradient) fs.grad_sigma_tilde = double_stress_gradient(Tensor4{}, gE, m);
    return fs;
}

}  // namespace

void add_bulk_point(const PointBasis& pb, const mat::MaterialSet& m, const Vector2d& body_force,
                    double free_charge, double w, LocalBlock& out) {
    const int n = pb.n;
    const int N = 3 * n;
    // Kinematic test rows (eps 4, grad eps 8, E 2) and flux trial rows
    // (sigma^ 4, sigma~ 8, -D^ 2); the point contribution is w * T^T S.
    Eigen::Matrix<double, 14, Eigen::Dynamic> T(14, N), S(14, N);
    T.setZero();
    S.setZero();

    for (int f = 0; f < n; ++f) {
        const double gx = first(pb, f, 0), gy = first(pb, f, 1);
        for (int d = 0; d < 2; ++d) {
            const int col = 2 * f + d;
            Matrix2d eps = Matrix2d::Zero();
            eps(d, 0) += 0.5 * gx;
            eps(d, 1) += 0.5 * gy;
            eps(0, d) += 0.5 * gx;
            eps(1, d) += 0.5 * gy;
            Tensor3 geps;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    for (int k = 0; k < 2; ++k)
                        geps(i, j, k) = 0.5 * ((i == d ? second(pb, f, j, k) : 0.0) +
                                               (j == d ? second(pb, f, i, k) : 0.0));
            int r = 0;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) T(r++, col) = eps(i, j);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    for (int k = 0; k < 2; ++k) T(r++, col) = geps(i, j, k);

            const Matrix2d sh = stress(eps, Vector2d::Zero(), m);
            const Tensor3 st = double_stress(geps, Vector2d::Zero(), m);
            const Vector2d dh = electric_displacement(eps, geps, Vector2d::Zero(), m);
            r = 0;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) S(r++, col) = sh(i, j);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    for (int k = 0; k < 2; ++k) S(r++, col) = st(i, j, k);
            S(12, col) = -dh(0);
            S(13, col) = -dh(1);

            out.F(col) += w * body_force(d) * pb.d[0][f];
        }
        const int col = 2 * n + f;
        const Vector2d E(-gx, -gy);
        T(12, col) = E(0);
        T(13, col) = E(1);
        const Matrix2d sh = stress(Matrix2d::Zero(), E, m);
        const Tensor3 st = double_stress(Tensor3{}, E, m);
        const Vector2d dh = m.kappa * E;
        int r = 0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) S(r++, col) = sh(i, j);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) S(r++, col) = st(i, j, k);
        S(12, col) = -dh(0);
        S(13, col) = -dh(1);

        out.F(col) -= w * free_charge * pb.d[0][f];
    }
    out.K.noalias() += w * T.transpose() * S;
}

BoundaryDofOps boundary_dof_ops(const PointBasis& pb, const geom::BoundaryFrame& fr,
                                const mat::MaterialSet& m) {
    const int n = pb.n;
    const int N = 3 * n;
    BoundaryDofOps ops;
    ops.t.setZero(2, N);
    ops.r.setZero(2, N);
    ops.u.setZero(2, N);
    ops.dnu.setZero(2, N);
    ops.w.setZero(N);
    ops.phi.setZero(N);

    for (int f = 0; f < n; ++f) {
        const double dn = first(pb, f, 0) * fr.n(0) + first(pb, f, 1) * fr.n(1);
        for (int d = 0; d < 2; ++d) {
            const int col = 2 * f + d;
            const FluxState fs = flux_of_u_dof(pb, f, d, m, true);
            ops.t.col(col) = traction(fs, fr);
            ops.r.col(col) = double_traction(fs.sigma_tilde, fr.n);
            ops.w(col) = surface_charge(fs.D_hat, fr.n);
            ops.u(d, col) = pb.d[0][f];
            ops.dnu(d, col) = dn;
        }
        const int col = 2 * n + f;
        const FluxState fs = flux_of_phi_dof(pb, f, m, true);
        ops.t.col(col) = traction(fs, fr);
        ops.r.col(col) = double_traction(fs.sigma_tilde, fr.n);
        ops.w(col) = surface_charge(fs.D_hat, fr.n);
        ops.phi(col) = pb.d[0][f];
    }
    return ops;
}

CornerDofOps corner_dof_ops(const PointBasis& pb, const geom::Corner& corner,
                            const mat::MaterialSet& m) {
    const int n = pb.n;
    const int N = 3 * n;
    CornerDofOps ops;
    ops.j.setZero(2, N);
    ops.u.setZero(2, N);
    for (int f = 0; f < n; ++f) {
        for (int d = 0; d < 2; ++d) {
            const int col = 2 * f + d;
            const FluxState fs = flux_of_u_dof(pb, f, d, m, false);
            ops.j.col(col) = corner_force(fs.sigma_tilde, fs.sigma_tilde, corner.incoming, corner.outgoing);
            ops.u(d, col) = pb.d[0][f];
        }
        const int col = 2 * n + f;
        const FluxState fs = flux_of_phi_dof(pb, f, m, false);
        ops.j.col(col) = corner_force(fs.sigma_tilde, fs.sigma_tilde, corner.incoming, corner.outgoing);
    }
    return ops;
}

void add_boundary_point(const PointBasis& pb, const geom::BoundaryFrame& fr, const RegionBC& bc,
                        const PenaltySet& beta, const mat::MaterialSet& m, double w, LocalBlock& out) {
    const int n = pb.n;
    const int N = 3 * n;
    const bool needs_ops = bc.u_kind == MechKind::Dirichlet || bc.v_kind == MechKind::Dirichlet ||
                           bc.e_kind != ElecKind::Neumann;

    if (!needs_ops) {
        // Pure Neumann: load terms only.
        const Vector2d tbar = eval_or_zero(bc.u_data, fr.x, &fr);
        const Vector2d rbar = eval_or_zero(bc.v_data, fr.x, &fr);
        const double wbar = eval_or_zero(bc.e_data, fr.x, &fr);
        for (int f = 0; f < n; ++f) {
            const double dn = first(pb, f, 0) * fr.n(0) + first(pb, f, 1) * fr.n(1);
            for (int d = 0; d < 2; ++d)
                out.F(2 * f + d) += w * (tbar(d) * pb.d[0][f] + rbar(d) * dn);
            out.F(2 * n + f) -= w * wbar * pb.d[0][f];
        }
        return;
    }

    const BoundaryDofOps ops = boundary_dof_ops(pb, fr, m);

    if (bc.u_kind == MechKind::Dirichlet) {
        const Vector2d ubar = eval_or_zero(bc.u_data, fr.x, &fr);
        for (int i = 0; i < 2; ++i) {
            if (!bc.u_mask[static_cast<size_t>(i)]) continue;  // complement: homogeneous Neumann
            const auto U = ops.u.row(i);
            const auto T = ops.t.row(i);
            out.K.noalias() += w * (beta.beta_u * U.transpose() * U - U.transpose() * T - T.transpose() * U);
            out.F.noalias() += w * ubar(i) * (beta.beta_u * U.transpose() - T.transpose());
        }
    } else {
        const Vector2d tbar = eval_or_zero(bc.u_data, fr.x, &fr);
        for (int i = 0; i < 2; ++i) out.F.noalias() += w * tbar(i) * ops.u.row(i).transpose();
    }

    if (bc.v_kind == MechKind::Dirichlet) {
        const Vector2d vbar = eval_or_zero(bc.v_data, fr.x, &fr);
        for (int i = 0; i < 2; ++i) {
            if (!bc.v_mask[static_cast<size_t>(i)]) continue;
            const auto V = ops.dnu.row(i);
            const auto R = ops.r.row(i);
            out.K.noalias() += w * (beta.beta_v * V.transpose() * V - V.transpose() * R - R.transpose() * V);
            out.F.noalias() += w * vbar(i) * (beta.beta_v * V.transpose() - R.transpose());
        }
    } else {
        const Vector2d rbar = eval_or_zero(bc.v_data, fr.x, &fr);
        for (int i = 0; i < 2; ++i) out.F.noalias() += w * rbar(i) * ops.dnu.row(i).transpose();
    }

    switch (bc.e_kind) {
        case ElecKind::Dirichlet: {
            const double phibar = eval_or_zero(bc.e_data, fr.x, &fr);
            const auto P = ops.phi;
            const auto W = ops.w;
            out.K.noalias() += w * (-beta.beta_phi * P.transpose() * P + W.transpose() * P + P.transpose() * W);
            out.F.noalias() += w * phibar * (-beta.beta_phi * P.transpose() + W.transpose());
            break;
        }
        case ElecKind::Electrode: {
            const auto P = ops.phi;
            const auto W = ops.w;
            out.K.noalias() += w * (W.transpose() * P + P.transpose() * W);
            auto it = out.electrode.find(bc.electrode);
            if (it == out.electrode.end()) it = out.electrode.emplace(bc.electrode, Eigen::VectorXd::Zero(N)).first;
            it->second.noalias() -= w * W.transpose();
            break;
        }
        case ElecKind::Neumann: {
            const double wbar = eval_or_zero(bc.e_data, fr.x, &fr);
            out.F.noalias() -= w * wbar * ops.phi.transpose();
            break;
        }
    }
}

void add_corner_point(const PointBasis& pb, const geom::Corner& corner, const CornerBC& bc,
                      const PenaltySet& beta, const mat::MaterialSet& m, LocalBlock& out) {
    const CornerDofOps ops = corner_dof_ops(pb, corner, m);
    if (bc.dirichlet) {
        const Vector2d ubar = eval_or_zero(bc.data, corner.x, nullptr);
        for (int i = 0; i < 2; ++i) {
            const auto U = ops.u.row(i);
            const auto J = ops.j.row(i);
            out.K.noalias() += beta.beta_cu * U.transpose() * U - U.transpose() * J - J.transpose() * U;
            out.F.noalias() += ubar(i) * (beta.beta_cu * U.transpose() - J.transpose());
        }
    } else {
        const Vector2d jbar = eval_or_zero(bc.data, corner.x, nullptr);
        for (int i = 0; i < 2; ++i) out.F.noalias() += jbar(i) * ops.u.row(i).transpose();
    }
}

}  // namespace flexo::forms
