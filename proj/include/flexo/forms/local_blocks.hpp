#pragma once

#include <Eigen/Dense>
#include <map>

#include "flexo/forms/bc.hpp"
#include "flexo/forms/tractions.hpp"
#include "flexo/geom/boundary_model.hpp"
#include "flexo/mat/materials.hpp"

namespace flexo::forms {

/// Basis values and derivatives of the n local functions at one point.
/// Slot order: value, x, y, xx, xy, yy, xxx, xxy, xyy, yyy. Bulk terms use
/// slots 0..5; Nitsche traction terms use all ten.
struct PointBasis {
    int n = 0;
    const double* d[10] = {nullptr, nullptr, nullptr, nullptr, nullptr,
                           nullptr, nullptr, nullptr, nullptr, nullptr};
};

struct PenaltySet {
    double beta_u = 0, beta_v = 0, beta_cu = 0, beta_phi = 0;
};

/// Cell-local contribution. Dof layout: u1,u2 of function f at 2f, 2f+1;
/// phi of function f at 2n + f. Electrode couplings are kept per electrode
/// index as one symmetric column.
struct LocalBlock {
    Eigen::MatrixXd K;
    Eigen::VectorXd F;
    std::map<int, Eigen::VectorXd> electrode;

    void init(int nfn) {
        K.setZero(3 * nfn, 3 * nfn);
        F.setZero(3 * nfn);
        electrode.clear();
    }
};

/// Generalized-traction operators of every local dof at a boundary point:
/// the values of t, r, w and the trace values u, dnu, phi per dof column.
struct BoundaryDofOps {
    Eigen::Matrix<double, 2, Eigen::Dynamic> t, r, u, dnu;
    Eigen::RowVectorXd w, phi;
};

/// Build the per-dof operators at a boundary point. Needs third basis
/// derivatives (slots 6..9) for the traction of the displacement dofs.
BoundaryDofOps boundary_dof_ops(const PointBasis& pb, const geom::BoundaryFrame& fr,
                                const mat::MaterialSet& m);

/// Corner-force operator j(dof) at a corner point plus trace values.
struct CornerDofOps {
    Eigen::Matrix<double, 2, Eigen::Dynamic> j, u;
};
CornerDofOps corner_dof_ops(const PointBasis& pb, const geom::Corner& corner,
                            const mat::MaterialSet& m);

/// Bulk weak form at one quadrature point:
/// eps(test):sigma^(trial) + grad eps(test):sigma~(trial) - E(test).D^(trial),
/// and the load b.delta_u - q delta_phi.
void add_bulk_point(const PointBasis& pb, const mat::MaterialSet& m, const Vector2d& body_force,
                    double free_charge, double w, LocalBlock& out);

/// Nitsche / Neumann boundary terms at one labeled quadrature point.
void add_boundary_point(const PointBasis& pb, const geom::BoundaryFrame& fr, const RegionBC& bc,
                        const PenaltySet& beta, const mat::MaterialSet& m, double w, LocalBlock& out);

/// Corner terms (0-dimensional, weight 1).
void add_corner_point(const PointBasis& pb, const geom::Corner& corner, const CornerBC& bc,
                      const PenaltySet& beta, const mat::MaterialSet& m, LocalBlock& out);

}  // namespace flexo::forms
