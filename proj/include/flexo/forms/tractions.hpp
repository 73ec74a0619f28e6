#pragma once

#include "flexo/forms/constitutive.hpp"
#include "flexo/geom/boundary_model.hpp"

namespace flexo::forms {

using geom::BoundaryFrame;
using geom::CornerSide;

/// Surface force conjugate to u, in the curvature form
/// t_i = (sigma^_ij - sigma~_ijk,k - grad^S_k sigma~_ikj) n_j + sigma~_ijk N~_jk.
Vector2d traction(const FluxState& f, const BoundaryFrame& fr);

/// The customary surface-divergence form
/// t_i = (sigma^_ij - sigma~_ijk,k + (grad^S_l n_l) sigma~_ijk n_k) n_j
///       - grad^S_j (sigma~_ijk n_k),
/// algebraically equal to traction(); kept as an independent route for
/// cross-checks.
Vector2d traction_surface_div_form(const FluxState& f, const BoundaryFrame& fr);

/// Double traction r_i = sigma~_ijk n_j n_k.
Vector2d double_traction(const Tensor3& sigma_tilde, const Vector2d& n);

/// Surface charge w = -D^_l n_l.
double surface_charge(const Vector2d& D_hat, const Vector2d& n);

/// Corner force contribution from one side: sigma~_ijk m_j n_k.
Vector2d corner_force_side(const Tensor3& sigma_tilde, const CornerSide& side);

/// Full corner force: the jump (sum over both sides) with the double stress
/// evaluated per side; the fields are continuous, so the two flux states
/// usually coincide.
Vector2d corner_force(const Tensor3& st_in, const Tensor3& st_out, const CornerSide& in,
                      const CornerSide& out);

}  // namespace flexo::forms
