#include <doctest.h>

#include <cmath>
#include <random>

#include "flexo/app/cases.hpp"
#include "flexo/forms/constitutive.hpp"
#include "flexo/forms/local_blocks.hpp"
#include "flexo/forms/tractions.hpp"
#include "flexo/mat/materials.hpp"
#include "flexo/mesh/quadrature.hpp"
#include "flexo/sys/assemble.hpp"
#include "flexo/util/gauss.hpp"

using namespace flexo;
using Eigen::Matrix2d;
using Eigen::Vector2d;
using mat::Tensor3;
using mat::Tensor4;

TEST_SUITE_BEGIN("forms");

namespace {

mat::MaterialParams benchmark_params() {
    mat::MaterialParams p;
    p.E = 100e9;
    p.nu = 0.37;
    p.l = 2e-3;
    p.kappa_L = 11e-9;
    p.e_L = 8.8;
    p.e_T = -4.4;
    p.e_S = 1.1;
    p.mu_L = 0.5;
    p.mu_T = 1.0;
    p.mu_S = 0.5;
    p.d_piezo = Vector2d(0, 1);
    return p;
}

forms::StateDerivatives random_state(std::mt19937& rng) {
    std::uniform_real_distribution<double> d(-1, 1);
    forms::StateDerivatives st;
    st.u = Vector2d(d(rng), d(rng));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) st.grad_u(i, j) = d(rng);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = j; k < 2; ++k) {
                const double v = d(rng);
                st.grad2_u(i, j, k) = v;
                st.grad2_u(i, k, j) = v;  // symmetric in the derivative slots
            }
    for (int i = 0; i < 2; ++i) {
        // Fully symmetric third derivatives: value per (count of y-indices).
        double vals[4] = {d(rng), d(rng), d(rng), d(rng)};
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c) st.grad3_u(i, a, b, c) = vals[a + b + c];
    }
    st.phi = d(rng);
    st.grad_phi = Vector2d(d(rng), d(rng));
    st.grad2_phi << d(rng), 0, 0, d(rng);
    st.grad2_phi(0, 1) = st.grad2_phi(1, 0) = d(rng);
    return st;
}

}  // namespace

TEST_CASE("constitutive law: zero state, pure elastic diagonal") {
    const auto m = build_material_set(benchmark_params());
    forms::StateDerivatives zero;
    const auto f = forms::constitutive(zero, m);
    CHECK(f.sigma_hat.norm() == 0.0);
    CHECK(f.D_hat.norm() == 0.0);

    mat::MaterialParams pe;
    pe.E = 100e9;
    pe.nu = 0.37;
    const auto me = build_material_set(pe);
    forms::StateDerivatives st;
    st.grad_u(0, 0) = 1.0;  // eps = diag(1, 0)
    const auto fe = forms::constitutive(st, me);
    double CL, CT, CS;
    elastic_constants(pe, CL, CT, CS);
    CHECK(fe.sigma_hat(0, 0) == doctest::Approx(CL).epsilon(1e-14));
    CHECK(fe.sigma_hat(1, 1) == doctest::Approx(CT).epsilon(1e-14));
    CHECK(std::abs(fe.sigma_hat(0, 1)) < 1e-6);
}

TEST_CASE("constitutive symmetries and the quadratic-energy identity") {
    const auto m = build_material_set(benchmark_params());
    std::mt19937 rng(4);
    for (int k = 0; k < 200; ++k) {
        const auto st = random_state(rng);
        const auto f = forms::constitutive(st, m);
        CHECK(std::abs(f.sigma_hat(0, 1) - f.sigma_hat(1, 0)) < 1e-9 * f.sigma_hat.norm());
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c)
                    CHECK(f.sigma_tilde(a, b, c) == doctest::Approx(f.sigma_tilde(b, a, c)).epsilon(1e-12));
        // For the quadratic density, the Euler relation gives
        // H = (sigma^:eps + sigma~:grad eps - D^.E) / 2 exactly.
        const Matrix2d eps = st.eps();
        const Tensor3 ge = st.grad_eps();
        const Vector2d E = st.E();
        double pair = 0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) pair += f.sigma_hat(i, j) * eps(i, j);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int c = 0; c < 2; ++c) pair += f.sigma_tilde(i, j, c) * ge(i, j, c);
        pair -= f.D_hat.dot(E);
        const double H = mat::energy_density(m, eps, ge, E);
        CHECK(0.5 * pair == doctest::Approx(H).epsilon(1e-12));
    }
}

TEST_CASE("tractions: classical limit and dielectric surface charge") {
    // Flat boundary, l = 0, mu = 0: t reduces to sigma^ . n.
    mat::MaterialParams pe;
    pe.E = 152e9;
    pe.nu = 0.33;
    pe.kappa_L = 141e-9;
    pe.e_L = 8.8;
    pe.e_T = -4.4;
    pe.e_S = 4.4;
    pe.d_piezo = Vector2d(0, 1);
    const auto me = build_material_set(pe);
    std::mt19937 rng(9);
    const auto square = app::square_boundary(1.0);
    const auto fr = square.frame_at(0, 1, 0.3);  // right edge, n = +x
    for (int k = 0; k < 50; ++k) {
        const auto st = random_state(rng);
        const auto f = forms::constitutive(st, me);
        CHECK(f.sigma_tilde.a == Tensor3{}.a);
        const Vector2d t = forms::traction(f, fr);
        const Vector2d tn = f.sigma_hat * fr.n;
        CHECK((t - tn).norm() < 1e-12 * tn.norm());
        CHECK(forms::double_traction(f.sigma_tilde, fr.n).norm() == 0.0);
    }

    // Pure dielectric with a uniform field along the normal: w = -kappa E1.
    mat::MaterialParams pd;
    pd.E = 1e9;
    pd.kappa_L = 3.0;
    const auto md = build_material_set(pd);
    forms::StateDerivatives st;
    st.grad_phi = Vector2d(-2.5, 0);  // E = (2.5, 0)
    const auto fd = forms::constitutive(st, md);
    CHECK(forms::surface_charge(fd.D_hat, Vector2d(1, 0)) == doctest::Approx(-3.0 * 2.5).epsilon(1e-14));
}

TEST_CASE("both traction expressions agree on circle and ellipse boundaries") {
    // Random double-stress states with consistent symmetries, frames from
    // rational-arc boundaries; the two algebraic routes must coincide.
    const auto m = build_material_set(benchmark_params());
    std::vector<geom::BoundaryModel> models;
    models.push_back(app::circle_boundary(1.3));
    {
        // Ellipse: affine image of the circle arcs (A = 1.5, B = 0.6).
        std::vector<geom::BoundaryChain> chains(1);
        for (int k = 0; k < 4; ++k) {
            const double a0 = -M_PI / 4 + k * M_PI / 2;
            auto arc = geom::NurbsCurve2D::arc(Vector2d(0, 0), 1.0, a0, a0 + M_PI / 2);
            std::vector<Vector2d> cps = arc.control();
            for (auto& c : cps) c = Vector2d(1.5 * c.x(), 0.6 * c.y());
            chains[0].segments.push_back(
                {geom::NurbsCurve2D(2, arc.knots(), cps, arc.weights()), "e"});
        }
        models.emplace_back(std::move(chains));
    }
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> td(0.02, 0.98);
    int total = 0;
    for (const auto& model : models) {
        for (int k = 0; k < 500; ++k) {
            const int seg = k % 4;
            const auto& curve = model.chain(0).segments[static_cast<size_t>(seg)].curve;
            const double t = curve.t_begin() + td(rng) * (curve.t_end() - curve.t_begin());
            const auto fr = model.frame_at(0, seg, t);
            const auto st = random_state(rng);
            const auto f = forms::constitutive(st, m);
            const Vector2d t1 = forms::traction(f, fr);
            const Vector2d t2 = forms::traction_surface_div_form(f, fr);
            CHECK((t1 - t2).norm() <= 1e-12 * std::max(1.0, t1.norm()));
            ++total;
        }
    }
    CHECK(total == 1000);
}

TEST_CASE("corner force: smooth junction cancels, square corner matches the hand contraction") {
    const auto m = build_material_set(benchmark_params());
    std::mt19937 rng(13);
    const auto st = random_state(rng);
    const auto f = forms::constitutive(st, m);

    // Smooth junction: m_in = -m_out, n_in = n_out.
    geom::CornerSide in, out;
    in.m = Vector2d(1, 0);
    in.n = Vector2d(0, -1);
    out.m = -in.m;
    out.n = in.n;
    CHECK(forms::corner_force(f.sigma_tilde, f.sigma_tilde, in, out).norm() < 1e-12);

    // sigma~ = 0 (l = 0, mu = 0) gives j = 0.
    mat::MaterialParams p0;
    p0.E = 1e9;
    p0.kappa_L = 1e-9;
    const auto f0 = forms::constitutive(st, build_material_set(p0));
    geom::CornerSide a, b;
    a.m = Vector2d(1, 0);
    a.n = Vector2d(0, -1);
    b.m = Vector2d(0, -1);
    b.n = Vector2d(1, 0);
    CHECK(forms::corner_force(f0.sigma_tilde, f0.sigma_tilde, a, b).norm() == 0.0);

    // Square bottom-right corner, hand-contracted jump.
    Vector2d j = forms::corner_force(f.sigma_tilde, f.sigma_tilde, a, b);
    Vector2d hand = Vector2d::Zero();
    for (int i = 0; i < 2; ++i)
        for (int p = 0; p < 2; ++p)
            for (int q = 0; q < 2; ++q)
                hand(i) += f.sigma_tilde(i, p, q) * (a.m(p) * a.n(q) + b.m(p) * b.n(q));
    CHECK((j - hand).norm() < 1e-12 * std::max(1.0, hand.norm()));
}

namespace {

// Local bulk block of a single inner cell for a given material.
forms::LocalBlock one_cell_block(const mat::MaterialSet& m, int degree = 3) {
    auto basis = spline::HierarchicalBasis::make_uniform(degree, 0, 0, 0.5, 2, 2);
    // All functions overlapping cell (0,0).
    const auto fns = basis.functions_on_cell(0, 0, 0);
    std::vector<double> pts, wts;
    flexo::util::gauss_legendre_01(degree + 1, pts, wts);
    forms::LocalBlock lb;
    lb.init(static_cast<int>(fns.size()));
    std::vector<double> scratch[10];
    forms::PointBasis pb;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts.size(); ++j) {
            const Vector2d x(0.5 * pts[i], 0.5 * pts[j]);
            sys::eval_point_basis(basis, fns, x, 5, scratch, pb);
            forms::add_bulk_point(pb, m, Vector2d::Zero(), 0.0, wts[i] * wts[j] * 0.25, lb);
        }
    return lb;
}

}  // namespace

TEST_CASE("bulk block: decoupling, symmetry and sign structure") {
    mat::MaterialParams p = benchmark_params();
    p.e_L = p.e_T = p.e_S = 0;
    p.mu_L = p.mu_T = p.mu_S = 0;
    const auto m0 = build_material_set(p);
    const auto lb = one_cell_block(m0);
    const int n = static_cast<int>(lb.K.rows()) / 3;
    // Coupling blocks vanish exactly without e and mu.
    CHECK(lb.K.block(0, 2 * n, 2 * n, n).norm() == 0.0);
    CHECK(lb.K.block(2 * n, 0, n, 2 * n).norm() == 0.0);
    // Symmetric local matrix.
    CHECK((lb.K - lb.K.transpose()).cwiseAbs().maxCoeff() <= 1e-13 * lb.K.cwiseAbs().maxCoeff());
    // Mechanical block PSD, electrical block NSD (before any Dirichlet terms).
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esu(lb.K.topLeftCorner(2 * n, 2 * n));
    CHECK(esu.eigenvalues().minCoeff() > -1e-8 * esu.eigenvalues().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esp(lb.K.bottomRightCorner(n, n));
    CHECK(esp.eigenvalues().maxCoeff() < 1e-20);

    // Full coupling keeps the saddle symmetry.
    const auto lbc = one_cell_block(build_material_set(benchmark_params()));
    CHECK((lbc.K - lbc.K.transpose()).cwiseAbs().maxCoeff() <= 1e-13 * lbc.K.cwiseAbs().maxCoeff());
}

TEST_CASE("dielectric phi-block equals the negative Laplacian stiffness") {
    mat::MaterialParams p;
    p.E = 1e9;
    p.kappa_L = 3.7;
    const auto lb = one_cell_block(build_material_set(p));
    const int n = static_cast<int>(lb.K.rows()) / 3;

    // Dense quadrature oracle: -kappa * int grad B_i . grad B_j over the cell,
    // with an independent (higher-order) Gauss rule and direct basis calls.
    auto basis = spline::HierarchicalBasis::make_uniform(3, 0, 0, 0.5, 2, 2);
    const auto fns = basis.functions_on_cell(0, 0, 0);
    std::vector<double> pts, wts;
    flexo::util::gauss_legendre_01(7, pts, wts);
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts.size(); ++j) {
            const double x = 0.5 * pts[i], y = 0.5 * pts[j];
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    const auto ka = basis.function(fns[static_cast<size_t>(a)]);
                    const auto kb = basis.function(fns[static_cast<size_t>(b)]);
                    const double gax = basis.eval(ka, x, y, 1, 0), gay = basis.eval(ka, x, y, 0, 1);
                    const double gbx = basis.eval(kb, x, y, 1, 0), gby = basis.eval(kb, x, y, 0, 1);
                    L(a, b) += -3.7 * (gax * gbx + gay * gby) * wts[i] * wts[j] * 0.25;
                }
        }
    CHECK((lb.K.bottomRightCorner(n, n) - L).cwiseAbs().maxCoeff() < 1e-12 * L.cwiseAbs().maxCoeff());
}

TEST_SUITE_END();
