#pragma once

#include "flexo/forms/state.hpp"

namespace flexo::forms {

/// Conjugate fluxes at a point: stress, double stress and electric
/// displacement, plus the spatial gradient of the double stress needed by
/// the boundary tractions (grad_sigma_tilde(i,j,k,q) = sigma~_ijk,q).
struct FluxState {
    Matrix2d sigma_hat = Matrix2d::Zero();
    Tensor3 sigma_tilde;
    Tensor4 grad_sigma_tilde;
    Vector2d D_hat = Vector2d::Zero();
};

/// sigma^_ij = C_ijkl eps_kl - e_lij E_l
/// sigma~_ijk = h_ijklmn eps_lm,n - mu_lijk E_l
/// D^_l = kappa_lm E_m + e_lij eps_ij + mu_lijk eps_ij,k
FluxState constitutive(const StateDerivatives& s, const mat::MaterialSet& m);

Matrix2d stress(const Matrix2d& eps, const Vector2d& E, const mat::MaterialSet& m);
Tensor3 double_stress(const Tensor3& grad_eps, const Vector2d& E, const mat::MaterialSet& m);
Vector2d electric_displacement(const Matrix2d& eps, const Tensor3& grad_eps, const Vector2d& E,
                               const mat::MaterialSet& m);
/// sigma~_ijk,q from eps_ij,kq and E_l,q (homogeneous material).
Tensor4 double_stress_gradient(const Tensor4& grad2_eps, const Matrix2d& grad_E,
                               const mat::MaterialSet& m);

}  // namespace flexo::forms
