#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

namespace flexo::mat {

using Eigen::Matrix2d;
using Eigen::Vector2d;

/// Dense small tensors over 2D indices. Memory is negligible; keeping every
/// component explicit avoids symmetry bookkeeping in the kernels.
struct Tensor3 {
    std::array<double, 8> a{};
    double& operator()(int l, int i, int j) { return a[static_cast<size_t>(((l * 2 + i) * 2 + j))]; }
    double operator()(int l, int i, int j) const { return a[static_cast<size_t>(((l * 2 + i) * 2 + j))]; }
};

struct Tensor4 {
    std::array<double, 16> a{};
    double& operator()(int i, int j, int k, int l) {
        return a[static_cast<size_t>((((i * 2 + j) * 2 + k) * 2 + l))];
    }
    double operator()(int i, int j, int k, int l) const {
        return a[static_cast<size_t>((((i * 2 + j) * 2 + k) * 2 + l))];
    }
};

struct Tensor6 {
    std::array<double, 64> a{};
    double& operator()(int i, int j, int k, int l, int m, int n) {
        return a[static_cast<size_t>((((((i * 2 + j) * 2 + k) * 2 + l) * 2 + m) * 2 + n))];
    }
    double operator()(int i, int j, int k, int l, int m, int n) const {
        return a[static_cast<size_t>((((((i * 2 + j) * 2 + k) * 2 + l) * 2 + m) * 2 + n))];
    }
};

enum class PlaneMode { Strain, Stress };

/// Scalar parameters generating all material tensors.
struct MaterialParams {
    double E = 0;        // Young modulus [Pa]
    double nu = 0;       // Poisson ratio
    double l = 0;        // strain-gradient length [m]
    double kappa_L = 0;  // dielectricity [J/V^2/m]
    double e_L = 0, e_T = 0, e_S = 0;     // piezoelectric couplings [J/V/m^2]
    double mu_L = 0, mu_T = 0, mu_S = 0;  // flexoelectric couplings [J/V/m]
    Vector2d d_piezo = Vector2d(1, 0);    // tetragonal principal direction
    double flexo_angle = 0;               // orientation of the cubic flexo axes [rad]
    PlaneMode mode = PlaneMode::Strain;
};

struct MaterialSet {
    Tensor4 C;       // elasticity
    Tensor6 h;       // strain-gradient elasticity
    Matrix2d kappa = Matrix2d::Zero();
    Tensor3 e;       // piezoelectricity, e_lij
    Tensor4 mu;      // flexoelectricity, mu_lijk
};

/// Elastic constants: longitudinal, transversal, shear.
void elastic_constants(const MaterialParams& p, double& CL, double& CT, double& CS);

Tensor4 build_elasticity(const MaterialParams& p);
Tensor6 build_strain_gradient(const MaterialParams& p);
Matrix2d build_dielectric(const MaterialParams& p);
Tensor3 build_piezo(const MaterialParams& p);
Tensor4 build_flexo(const MaterialParams& p);
MaterialSet build_material_set(const MaterialParams& p);

Tensor3 rotate(const Tensor3& t, const Matrix2d& R);
Tensor4 rotate(const Tensor4& t, const Matrix2d& R);

/// Material restriction report: empty when admissible. Checks the tensor
/// conditions kappa_ii > 0, C_ijij > 0, h_ijkijk >= 0 plus the scalar forms
/// kappa_L, C_L, C_S > 0 and l >= 0. With electrical_active = false the
/// dielectric positivity is not required.
std::vector<std::string> check_restrictions(const MaterialSet& set, const MaterialParams& p,
                                            bool electrical_active = true);

/// Bulk energy density at a pointwise state (dense contraction):
/// 1/2 e:C:e + 1/2 grad(e):h:grad(e) - 1/2 E.kappa.E - E.e:eps - E.mu:grad(e).
/// grad_eps is indexed (i,j,k) = eps_ij,k.
double energy_density(const MaterialSet& m, const Matrix2d& eps, const Tensor3& grad_eps,
                      const Vector2d& E);

}  // namespace flexo::mat
