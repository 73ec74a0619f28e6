#include "flexo/mat/materials.hpp"

#include <cmath>
#include <stdexcept>

namespace flexo::mat {

void elastic_constants(const MaterialParams& p, double& CL, double& CT, double& CS) {
    if (p.mode == PlaneMode::Strain) {
        const double den = (1.0 + p.nu) * (1.0 - 2.0 * p.nu);
        if (std::abs(den) < 1e-300) throw std::invalid_argument("elastic_constants: nu = 0.5 is singular in plane strain");
        CL = p.E * (1.0 - p.nu) / den;
        CT = p.E * p.nu / den;
    } else {
        CL = p.E / (1.0 - p.nu * p.nu);
        CT = p.E * p.nu / (1.0 - p.nu * p.nu);
    }
    CS = p.E / (2.0 * (1.0 + p.nu));
}

Tensor4 build_elasticity(const MaterialParams& p) {
    if (std::abs(p.nu) >= 1.0) throw std::invalid_argument("build_elasticity: |nu| must be < 1");
    double CL, CT, CS;
    elastic_constants(p, CL, CT, CS);
    Tensor4 C;
    for (int i = 0; i < 2; ++i) {
        C(i, i, i, i) = CL;
        for (int j = 0; j < 2; ++j) {
            if (i == j) continue;
            C(i, i, j, j) = CT;
            C(i, j, i, j) = CS;
            C(i, j, j, i) = CS;
        }
    }
    return C;
}

Tensor6 build_strain_gradient(const MaterialParams& p) {
    if (p.l < 0) throw std::invalid_argument("build_strain_gradient: l must be >= 0");
    double CL, CT, CS;
    elastic_constants(p, CL, CT, CS);
    const double l2 = p.l * p.l;
    Tensor6 h;
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) {
            h(i, i, k, i, i, k) = l2 * CL;
            for (int j = 0; j < 2; ++j) {
                if (i == j) continue;
                h(i, i, k, j, j, k) = l2 * CT;
                h(i, j, k, i, j, k) = l2 * CS;
                h(i, j, k, j, i, k) = l2 * CS;
            }
        }
    return h;
}

Matrix2d build_dielectric(const MaterialParams& p) {
    return p.kappa_L * Matrix2d::Identity();
}

Tensor3 rotate(const Tensor3& t, const Matrix2d& R) {
    Tensor3 out;
    for (int l = 0; l < 2; ++l)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double s = 0;
                for (int L = 0; L < 2; ++L)
                    for (int I = 0; I < 2; ++I)
                        for (int J = 0; J < 2; ++J) s += R(l, L) * R(i, I) * R(j, J) * t(L, I, J);
                out(l, i, j) = s;
            }
    return out;
}

Tensor4 rotate(const Tensor4& t, const Matrix2d& R) {
    Tensor4 out;
    for (int l = 0; l < 2; ++l)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) {
                    double s = 0;
                    for (int L = 0; L < 2; ++L)
                        for (int I = 0; I < 2; ++I)
                            for (int J = 0; J < 2; ++J)
                                for (int K = 0; K < 2; ++K)
                                    s += R(l, L) * R(i, I) * R(j, J) * R(k, K) * t(L, I, J, K);
                    out(l, i, j, k) = s;
                }
    return out;
}

Tensor3 build_piezo(const MaterialParams& p) {
    const double norm = p.d_piezo.norm();
    if (norm < 1e-14) throw std::invalid_argument("build_piezo: zero principal direction");
    Tensor3 e;
    e(0, 0, 0) = p.e_L;
    e(0, 1, 1) = p.e_T;
    e(1, 0, 1) = p.e_S;
    e(1, 1, 0) = p.e_S;
    const Vector2d d = p.d_piezo / norm;
    Matrix2d R;
    R << d.x(), -d.y(), d.y(), d.x();  // rotates x1 onto d
    return rotate(e, R);
}

Tensor4 build_flexo(const MaterialParams& p) {
    Tensor4 mu;
    for (int i = 0; i < 2; ++i) {
        mu(i, i, i, i) = p.mu_L;
        for (int j = 0; j < 2; ++j) {
            if (i == j) continue;
            mu(i, j, j, i) = p.mu_T;
            mu(i, i, j, j) = p.mu_S;
            mu(i, j, i, j) = p.mu_S;
        }
    }
    if (p.flexo_angle != 0) {
        Matrix2d R;
        R << std::cos(p.flexo_angle), -std::sin(p.flexo_angle), std::sin(p.flexo_angle),
            std::cos(p.flexo_angle);
        mu = rotate(mu, R);
    }
    return mu;
}

MaterialSet build_material_set(const MaterialParams& p) {
    MaterialSet m;
    m.C = build_elasticity(p);
    m.h = build_strain_gradient(p);
    m.kappa = build_dielectric(p);
    m.e = build_piezo(p);
    m.mu = build_flexo(p);
    return m;
}

std::vector<std::string> check_restrictions(const MaterialSet& set, const MaterialParams& p,
                                            bool electrical_active) {
    std::vector<std::string> v;
    if (electrical_active) {
        for (int i = 0; i < 2; ++i)
            if (!(set.kappa(i, i) > 0)) v.push_back("kappa_" + std::to_string(i + 1) + std::to_string(i + 1) + " must be positive");
        if (!(p.kappa_L > 0)) v.push_back("kappa_L must be positive");
    }
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (!(set.C(i, j, i, j) > 0))
                v.push_back("C_" + std::to_string(i + 1) + std::to_string(j + 1) + std::to_string(i + 1) +
                            std::to_string(j + 1) + " must be positive");
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                if (set.h(i, j, k, i, j, k) < 0)
                    v.push_back("h_ijkijk must be nonnegative at i,j,k = " + std::to_string(i + 1) +
                                std::to_string(j + 1) + std::to_string(k + 1));
    double CL, CT, CS;
    elastic_constants(p, CL, CT, CS);
    if (!(CL > 0)) v.push_back("C_L must be positive");
    if (!(CS > 0)) v.push_back("C_S must be positive");
    if (p.l < 0) v.push_back("l must be nonnegative");
    return v;
}

double energy_density(const MaterialSet& m, const Matrix2d& eps, const Tensor3& grad_eps,
                      const Vector2d& E) {
    double s = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) s += 0.5 * eps(i, j) * m.C(i, j, k, l) * eps(k, l);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    for (int a = 0; a < 2; ++a)
                        for (int b = 0; b < 2; ++b)
                            s += 0.5 * grad_eps(i, j, k) * m.h(i, j, k, l, a, b) * grad_eps(l, a, b);
    s -= 0.5 * E.dot(m.kappa * E);
    for (int l = 0; l < 2; ++l)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) s -= E(l) * m.e(l, i, j) * eps(i, j);
    for (int l = 0; l < 2; ++l)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) s -= E(l) * m.mu(l, i, j, k) * grad_eps(i, j, k);
    return s;
}

}  // namespace flexo::mat
