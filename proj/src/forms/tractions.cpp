#include "flexo/forms/tractions.hpp"

namespace flexo::forms {

Vector2d traction(const FluxState& f, const BoundaryFrame& fr) {
    Vector2d t = Vector2d::Zero();
    for (int i = 0; i < 2; ++i) {
        double v = 0;
        for (int j = 0; j < 2; ++j) {
            double term = f.sigma_hat(i, j);
            for (int k = 0; k < 2; ++k) term -= f.grad_sigma_tilde(i, j, k, k);
            // grad^S_k sigma~_ikj = sigma~_ikj,q P_qk
            for (int k = 0; k < 2; ++k)
                for (int q = 0; q < 2; ++q) term -= f.grad_sigma_tilde(i, k, j, q) * fr.P(q, k);
            v += term * fr.n(j);
        }
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) v += f.sigma_tilde(i, j, k) * fr.Ntilde(j, k);
        t(i) = v;
    }
    return t;
}

Vector2d traction_surface_div_form(const FluxState& f, const BoundaryFrame& fr) {
    // grad^S n = -S; surface divergence of n is -2H.
    const double div_s_n = -2.0 * fr.H;
    Vector2d t = Vector2d::Zero();
    for (int i = 0; i < 2; ++i) {
        double v = 0;
        for (int j = 0; j < 2; ++j) {
            double term = f.sigma_hat(i, j);
            for (int k = 0; k < 2; ++k) term -= f.grad_sigma_tilde(i, j, k, k);
            for (int k = 0; k < 2; ++k) term += div_s_n * f.sigma_tilde(i, j, k) * fr.n(k);
            v += term * fr.n(j);
        }
        // grad^S_j (sigma~_ijk n_k) = (sigma~_ijk,q P_qj) n_k + sigma~_ijk (n_k,q P_qj)
        // with grad^S n = -S.
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                for (int q = 0; q < 2; ++q) v -= f.grad_sigma_tilde(i, j, k, q) * fr.P(q, j) * fr.n(k);
                v += f.sigma_tilde(i, j, k) * fr.S(k, j);
            }
        t(i) = v;
    }
    return t;
}

Vector2d double_traction(const Tensor3& sigma_tilde, const Vector2d& n) {
    Vector2d r = Vector2d::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) r(i) += sigma_tilde(i, j, k) * n(j) * n(k);
    return r;
}

double surface_charge(const Vector2d& D_hat, const Vector2d& n) { return -D_hat.dot(n); }

Vector2d corner_force_side(const Tensor3& sigma_tilde, const CornerSide& side) {
    Vector2d j = Vector2d::Zero();
    for (int i = 0; i < 2; ++i)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) j(i) += sigma_tilde(i, a, b) * side.m(a) * side.n(b);
    return j;
}

Vector2d corner_force(const Tensor3& st_in, const Tensor3& st_out, const CornerSide& in,
                      const CornerSide& out) {
    return corner_force_side(st_in, in) + corner_force_side(st_out, out);
}

}  // namespace flexo::forms
