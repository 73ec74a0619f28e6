#include <doctest.h>

#include <cmath>
#include <random>

#include "flexo/mat/materials.hpp"

using namespace flexo::mat;
using Eigen::Matrix2d;
using Eigen::Vector2d;

TEST_SUITE_BEGIN("materials");

TEST_CASE("plane strain elastic constants") {
    MaterialParams p;
    p.E = 100e9;
    p.nu = 0.37;
    double CL, CT, CS;
    elastic_constants(p, CL, CT, CS);
    CHECK(CL == doctest::Approx(176.87e9).epsilon(2e-4));
    CHECK(CT == doctest::Approx(103.87e9).epsilon(2e-4));
    CHECK(CS == doctest::Approx(36.50e9).epsilon(2e-4));

    p.nu = 0;
    p.E = 1.0;
    elastic_constants(p, CL, CT, CS);
    CHECK(CL == doctest::Approx(1.0));
    CHECK(CT == doctest::Approx(0.0));
    CHECK(CS == doctest::Approx(0.5));

    p.nu = 0.5;
    CHECK_THROWS(build_elasticity(p));
}

TEST_CASE("elasticity tensor symmetries hold exactly") {
    MaterialParams p;
    p.E = 152e9;
    p.nu = 0.33;
    const Tensor4 C = build_elasticity(p);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) {
                    CHECK(C(i, j, k, l) == C(k, l, i, j));
                    CHECK(C(i, j, k, l) == C(j, i, k, l));
                    CHECK(C(i, j, k, l) == C(i, j, l, k));
                }
}

TEST_CASE("strain gradient tensor: l = 0 vanishes, l > 0 scales C patterns") {
    MaterialParams p;
    p.E = 100e9;
    p.nu = 0.37;
    p.l = 0;
    Tensor6 h0 = build_strain_gradient(p);
    double norm = 0;
    for (double v : h0.a) norm += std::abs(v);
    CHECK(norm == 0.0);

    p.l = 2e-9;
    const Tensor6 h = build_strain_gradient(p);
    double CL, CT, CS;
    elastic_constants(p, CL, CT, CS);
    CHECK(h(0, 0, 0, 0, 0, 0) == doctest::Approx(p.l * p.l * CL).epsilon(1e-14));
    CHECK(h(0, 0, 1, 0, 0, 1) == doctest::Approx(p.l * p.l * CL).epsilon(1e-14));
    CHECK(h(0, 0, 1, 1, 1, 1) == doctest::Approx(p.l * p.l * CT).epsilon(1e-14));
    CHECK(h(0, 1, 0, 0, 1, 0) == doctest::Approx(p.l * p.l * CS).epsilon(1e-14));
    // Symmetries h_ijklmn = h_lmnijk = h_jiklmn.
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    for (int m = 0; m < 2; ++m)
                        for (int n = 0; n < 2; ++n) {
                            CHECK(h(i, j, k, l, m, n) == h(l, m, n, i, j, k));
                            CHECK(h(i, j, k, l, m, n) == h(j, i, k, l, m, n));
                        }
}

TEST_CASE("piezo tensor in principal axes and rotated by 90 degrees") {
    MaterialParams p;
    p.e_L = 8.8;
    p.e_T = -4.4;
    p.e_S = 4.4;
    p.d_piezo = Vector2d(1, 0);
    const Tensor3 e1 = build_piezo(p);
    CHECK(e1(0, 0, 0) == doctest::Approx(8.8));
    CHECK(e1(0, 1, 1) == doctest::Approx(-4.4));
    CHECK(e1(1, 0, 1) == doctest::Approx(4.4));
    CHECK(e1(1, 1, 0) == doctest::Approx(4.4));
    CHECK(e1(1, 1, 1) == doctest::Approx(0.0));

    p.d_piezo = Vector2d(0, 1);
    const Tensor3 e2 = build_piezo(p);
    CHECK(e2(1, 1, 1) == doctest::Approx(8.8).epsilon(1e-14));
    CHECK(e2(1, 0, 0) == doctest::Approx(-4.4).epsilon(1e-14));
    CHECK(e2(0, 1, 0) == doctest::Approx(4.4).epsilon(1e-14));
    CHECK(e2(0, 0, 1) == doctest::Approx(4.4).epsilon(1e-14));
    CHECK(std::abs(e2(0, 0, 0)) < 1e-14);

    // Explicit rotation oracle.
    Matrix2d R;
    R << 0, -1, 1, 0;
    p.d_piezo = Vector2d(1, 0);
    const Tensor3 er = rotate(build_piezo(p), R);
    for (int l = 0; l < 2; ++l)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) CHECK(er(l, i, j) == doctest::Approx(e2(l, i, j)).epsilon(1e-14));

    // Symmetry e_lij = e_lji.
    for (int l = 0; l < 2; ++l)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) CHECK(e2(l, i, j) == e2(l, j, i));

    p.d_piezo = Vector2d(0, 0);
    CHECK_THROWS(build_piezo(p));
}

TEST_CASE("isotropic-coefficient flexo tensor is invariant under 90-degree rotations") {
    MaterialParams p;
    p.mu_L = 3.0;
    p.mu_T = 3.0;
    p.mu_S = 3.0;
    const Tensor4 mu = build_flexo(p);
    Matrix2d R;
    R << 0, -1, 1, 0;
    const Tensor4 mur = rotate(mu, R);
    for (int a = 0; a < 16; ++a) CHECK(mur.a[static_cast<size_t>(a)] == doctest::Approx(mu.a[static_cast<size_t>(a)]).epsilon(1e-13));

    // Cubic pattern with distinct couplings keeps its symmetry mu_lijk = mu_ljik.
    p.mu_L = 1.5;
    p.mu_T = 1.1;
    p.mu_S = 0.7;
    const Tensor4 mu2 = build_flexo(p);
    CHECK(mu2(0, 0, 0, 0) == doctest::Approx(1.5));
    CHECK(mu2(0, 1, 1, 0) == doctest::Approx(1.1));
    CHECK(mu2(0, 0, 1, 1) == doctest::Approx(0.7));
    CHECK(mu2(0, 1, 0, 1) == doctest::Approx(0.7));
    for (int l = 0; l < 2; ++l)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) CHECK(mu2(l, i, j, k) == mu2(l, j, i, k));

    // 90-degree rotation permutes the cubic axes: still cubic with the same couplings.
    const Tensor4 mu2r = rotate(mu2, R);
    CHECK(mu2r(1, 1, 1, 1) == doctest::Approx(1.5).epsilon(1e-13));
    CHECK(mu2r(1, 0, 0, 1) == doctest::Approx(1.1).epsilon(1e-13));
}

TEST_CASE("rotation round trip returns the canonical tensor") {
    MaterialParams p;
    p.e_L = 8.8;
    p.e_T = -4.4;
    p.e_S = 1.1;
    p.mu_L = 0.5;
    p.mu_T = 1.0;
    p.mu_S = 0.5;
    const double th = 0.7;
    Matrix2d R;
    R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    const Tensor3 e = build_piezo(p);
    const Tensor3 e2 = rotate(rotate(e, R), R.transpose().eval());
    for (int a = 0; a < 8; ++a) CHECK(e2.a[static_cast<size_t>(a)] == doctest::Approx(e.a[static_cast<size_t>(a)]).epsilon(1e-13));
    const Tensor4 mu = build_flexo(p);
    const Tensor4 mu2 = rotate(rotate(mu, R), R.transpose().eval());
    for (int a = 0; a < 16; ++a) CHECK(mu2.a[static_cast<size_t>(a)] == doctest::Approx(mu.a[static_cast<size_t>(a)]).epsilon(1e-13));
}

TEST_CASE("restrictions: benchmark parameters pass, bad ones are reported") {
    MaterialParams good;
    good.E = 100e9;
    good.nu = 0.37;
    good.l = 2e-9;
    good.kappa_L = 11e-9;
    good.e_L = 8.8;
    good.e_T = -4.4;
    good.e_S = 1.1;
    good.mu_L = 0.5e-6;
    good.mu_T = 1e-6;
    good.mu_S = 0.5e-6;
    good.d_piezo = Vector2d(0, 1);
    CHECK(check_restrictions(build_material_set(good), good).empty());

    MaterialParams badk = good;
    badk.kappa_L = -1;
    CHECK(!check_restrictions(build_material_set(badk), badk).empty());
    CHECK(check_restrictions(build_material_set(badk), badk, false).empty());  // mechanics only

    MaterialParams badl = good;
    badl.l = -1;
    CHECK_THROWS(build_strain_gradient(badl));
}

TEST_CASE("energy density: uniform unit strain against the pattern sum") {
    MaterialParams p;
    p.E = 152e9;
    p.nu = 0.33;
    const MaterialSet m = build_material_set(p);
    const Matrix2d eps = Matrix2d::Identity();
    const double H = energy_density(m, eps, Tensor3{}, Vector2d::Zero());
    double CL, CT, CS;
    elastic_constants(p, CL, CT, CS);
    // 1/2 (C_1111 + C_1122 + C_2211 + C_2222) = CL + CT for unit biaxial strain.
    CHECK(H == doctest::Approx(CL + CT).epsilon(1e-14));
}

TEST_SUITE_END();
