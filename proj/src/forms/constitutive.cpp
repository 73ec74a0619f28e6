#include "flexo/forms/constitutive.hpp"

namespace flexo::forms {

Matrix2d stress(const Matrix2d& eps, const Vector2d& E, const mat::MaterialSet& m) {
    Matrix2d s = Matrix2d::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double v = 0;
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) v += m.C(i, j, k, l) * eps(k, l);
            for (int l = 0; l < 2; ++l) v -= m.e(l, i, j) * E(l);
            s(i, j) = v;
        }
    return s;
}

Tensor3 double_stress(const Tensor3& grad_eps, const Vector2d& E, const mat::MaterialSet& m) {
    Tensor3 s;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                double v = 0;
                for (int l = 0; l < 2; ++l)
                    for (int a = 0; a < 2; ++a)
                        for (int b = 0; b < 2; ++b) v += m.h(i, j, k, l, a, b) * grad_eps(l, a, b);
                for (int l = 0; l < 2; ++l) v -= m.mu(l, i, j, k) * E(l);
                s(i, j, k) = v;
            }
    return s;
}

Vector2d electric_displacement(const Matrix2d& eps, const Tensor3& grad_eps, const Vector2d& E,
                               const mat::MaterialSet& m) {
    Vector2d d = m.kappa * E;
    for (int l = 0; l < 2; ++l) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) d(l) += m.e(l, i, j) * eps(i, j);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) d(l) += m.mu(l, i, j, k) * grad_eps(i, j, k);
    }
    return d;
}

Tensor4 double_stress_gradient(const Tensor4& grad2_eps, const Matrix2d& grad_E,
                               const mat::MaterialSet& m) {
    Tensor4 g;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int q = 0; q < 2; ++q) {
                    double v = 0;
                    for (int l = 0; l < 2; ++l)
                        for (int a = 0; a < 2; ++a)
                            for (int b = 0; b < 2; ++b) v += m.h(i, j, k, l, a, b) * grad2_eps(l, a, b, q);
                    for (int l = 0; l < 2; ++l) v -= m.mu(l, i, j, k) * grad_E(l, q);
                    g(i, j, k, q) = v;
                }
    return g;
}

FluxState constitutive(const StateDerivatives& s, const mat::MaterialSet& m) {
    FluxState f;
    const Matrix2d eps = s.eps();
    const Tensor3 ge = s.grad_eps();
    const Vector2d E = s.E();
    f.sigma_hat = stress(eps, E, m);
    f.sigma_tilde = double_stress(ge, E, m);
    f.D_hat = electric_displacement(eps, ge, E, m);
    f.grad_sigma_tilde = double_stress_gradient(s.grad2_eps(), s.grad_E(), m);
    return f;
}

}  // namespace flexo::forms
