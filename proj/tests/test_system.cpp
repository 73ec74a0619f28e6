#include <doctest.h>

#include <cmath>
#include <random>

#include "flexo/app/runner.hpp"
#include "flexo/sys/penalty.hpp"
#include "flexo/sys/solve.hpp"
#include "flexo/sys/spectral.hpp"
#include "helpers.hpp"

using namespace flexo;
using Eigen::Vector2d;

TEST_SUITE_BEGIN("system");

TEST_CASE("identity system solves trivially with unit condition number") {
    Eigen::SparseMatrix<double> A(5, 5);
    A.setIdentity();
    Eigen::VectorXd b(5);
    b << 1, -2, 3, 0.5, -0.25;
    const auto rep = sys::solve_system(A, b, true);
    REQUIRE(rep.ok);
    CHECK((rep.x - b).norm() == 0.0);
    CHECK(rep.kappa1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.residual == 0.0);
}

TEST_CASE("dielectric strip reproduces the linear potential exactly") {
    // Rectangle with Dirichlet phi on the two vertical sides and grounded
    // mechanics; the solution is linear in x and lies in the space.
    auto setup = app::PipelineSetup{};
    setup.boundary = std::make_shared<geom::BoundaryModel>(app::rectangle_boundary(0, 0, 2, 1));
    setup.nx = 10;
    setup.ny = 6;
    setup.h = 1.0 / 4.5;
    setup.x0 = -0.5 * setup.h;
    setup.y0 = -0.5 * setup.h;
    mat::MaterialParams mp;
    mp.E = 1e9;
    mp.nu = 0.3;
    mp.kappa_L = 2.0;
    setup.material = mp;
    setup.make_bcs = [](const geom::BoundaryModel& model) {
        forms::BCRegionSpec spec;
        forms::RegionBC lr;
        lr.u_kind = forms::MechKind::Dirichlet;
        lr.e_kind = forms::ElecKind::Dirichlet;
        lr.e_data = [](const Vector2d& x, const geom::BoundaryFrame*) { return x.x(); };
        spec.regions[model.region_id("left")] = lr;
        spec.regions[model.region_id("right")] = lr;
        forms::RegionBC tb;
        tb.u_kind = forms::MechKind::Dirichlet;
        spec.regions[model.region_id("top")] = tb;
        spec.regions[model.region_id("bottom")] = tb;
        for (int c = 0; c < static_cast<int>(model.corners().size()); ++c) {
            forms::CornerBC cb;
            cb.dirichlet = true;
            spec.corners[c] = cb;
        }
        return spec;
    };
    auto p = app::Pipeline::build(setup);
    REQUIRE(p->solve(false));
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> dx(0.05, 1.95), dy(0.05, 0.95);
    for (int k = 0; k < 100; ++k) {
        const Vector2d x(dx(rng), dy(rng));
        const auto st = p->field->eval(x, 0, false);
        CHECK(std::abs(st.phi - x.x()) < 1e-11);
        CHECK(st.u.norm() < 1e-11);
    }
}

TEST_CASE("assembled saddle matrix is symmetric") {
    auto setup = app::corner_study_setup(1.0, true, 100, 12, 3);
    auto p = app::Pipeline::build(setup);
    const Eigen::SparseMatrix<double> At = Eigen::SparseMatrix<double>(p->system.A.transpose());
    double asym = 0, scale = 0;
    for (int k = 0; k < p->system.A.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(p->system.A, k); it; ++it) {
            asym = std::max(asym, std::abs(it.value() - At.coeff(it.row(), it.col())));
            scale = std::max(scale, std::abs(it.value()));
        }
    }
    CHECK(asym <= 1e-12 * scale);
}

TEST_CASE("consistency: the exact cubic solution satisfies the discrete system") {
    // Insert the synthetic solution into the stabilized space; the residual
    // must vanish up to round-off (Galerkin orthogonality of a consistent
    // formulation with an exactly representable solution).
    auto setup = app::corner_study_setup(1.0, true, 100, 32, 3);
    auto p = app::Pipeline::build(setup);
    const auto ref = setup.reference;

    const auto cu1 = flexo_test::tensor_l2_coeffs(p->basis, [&](double x, double y) {
        return ref->u(0, 0, 0, Vector2d(x, y));
    });
    const auto cu2 = flexo_test::tensor_l2_coeffs(p->basis, [&](double x, double y) {
        return ref->u(1, 0, 0, Vector2d(x, y));
    });
    const auto cph = flexo_test::tensor_l2_coeffs(p->basis, [&](double x, double y) {
        return ref->phi(0, 0, Vector2d(x, y));
    });

    const int S = p->system.n_stable;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(p->system.n_dofs());
    const int first = p->basis.level(0).first_index();
    for (int r = 0; r < p->dofs->n_retained(); ++r) {
        const int s = p->stab.stable_of_retained[static_cast<size_t>(r)];
        if (s < 0) continue;
        const auto key = p->basis.function(p->dofs->fn_of(r));
        c(2 * s) = cu1(key.i - first, key.j - first);
        c(2 * s + 1) = cu2(key.i - first, key.j - first);
        c(2 * S + s) = cph(key.i - first, key.j - first);
    }
    const Eigen::VectorXd r = p->system.A * c - p->system.b;
    CHECK(r.norm() <= 1e-10 * p->system.b.norm());
}

TEST_CASE("assembly is deterministic and thread-count independent") {
    auto setup = app::corner_study_setup(1.0, true, 100, 10, 3);
    auto p1 = app::Pipeline::build(setup);
    auto p2 = app::Pipeline::build(setup);
    setup.threads = 4;
    auto p4 = app::Pipeline::build(setup);

    REQUIRE(p1->system.A.nonZeros() == p2->system.A.nonZeros());
    REQUIRE(p1->system.A.nonZeros() == p4->system.A.nonZeros());
    const auto *v1 = p1->system.A.valuePtr(), *v2 = p2->system.A.valuePtr(), *v4 = p4->system.A.valuePtr();
    bool same12 = true, same14 = true;
    for (int k = 0; k < p1->system.A.nonZeros(); ++k) {
        same12 = same12 && (v1[k] == v2[k]);
        same14 = same14 && (v1[k] == v4[k]);
    }
    CHECK(same12);
    CHECK(same14);
    CHECK((p1->system.b - p4->system.b).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("stabilization: identity without cut cells, reproduction with them") {
    // Fitted-like square: boundary in the margin cells only.
    auto setup = app::corner_study_setup(1.0, true, 100, 16, 3);
    auto p = app::Pipeline::build(setup);
    CHECK(p->stab.mode == sys::StabMode::ExtendedBsplines);
    CHECK(p->stab.n_stable < p->stab.n_raw);  // boundary functions were tied

    // Degree-3 polynomial reproduction through the stabilized map: project,
    // push through F, evaluate.
    auto poly = [](double x, double y) { return 0.3 + x - 0.5 * y + 0.25 * x * x * y - y * y * x; };
    const auto c0 = flexo_test::tensor_l2_coeffs(p->basis, poly);
    const int first = p->basis.level(0).first_index();
    // Stabilized coefficients: entries of kept functions.
    Eigen::VectorXd cs = Eigen::VectorXd::Zero(p->stab.n_stable);
    for (int r = 0; r < p->dofs->n_retained(); ++r) {
        const int s = p->stab.stable_of_retained[static_cast<size_t>(r)];
        if (s < 0) continue;
        const auto key = p->basis.function(p->dofs->fn_of(r));
        cs(s) = c0(key.i - first, key.j - first);
    }
    const Eigen::VectorXd craw = p->stab.F * cs;
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> d(-0.99, 0.99);
    for (int k = 0; k < 200; ++k) {
        const double x = d(rng), y = d(rng);
        double v = 0;
        for (int r = 0; r < p->dofs->n_retained(); ++r) {
            const auto key = p->basis.function(p->dofs->fn_of(r));
            v += craw(r) * p->basis.eval(key, x, y, 0, 0);
        }
        CHECK(std::abs(v - poly(x, y)) < 1e-10 * std::max(1.0, std::abs(poly(x, y))));
    }
}

TEST_CASE("spectral extremes: pure Neumann mechanics has (near) zero modes") {
    auto setup = app::corner_study_setup(1.0, true, 100, 10, 3);
    // Wipe all mechanical Dirichlet data: pure Neumann.
    auto ref = setup.reference;
    setup.make_bcs = [ref](const geom::BoundaryModel& model) {
        forms::BCRegionSpec spec;
        forms::RegionBC bc;
        bc.e_kind = forms::ElecKind::Dirichlet;
        bc.e_data = app::reference_phi_data(ref);
        for (int r = 0; r < static_cast<int>(model.regions().size()); ++r) spec.regions[r] = bc;
        return spec;
    };
    auto p = app::Pipeline::build(setup);
    CHECK(!p->system.warnings.empty());
    const auto ex = sys::symmetric_extremes(p->system.Kuu());
    CHECK(std::abs(ex.lmin) < 1e-8 * std::abs(ex.lmax));  // rigid modes
}

TEST_CASE("spectral check is stable for the benchmark penalty") {
    auto setup = app::corner_study_setup(1.0, true, 100, 12, 3);
    auto p = app::Pipeline::build(setup);
    const auto sc = p->spectral();
    CHECK(sc.lambda_min_uu > 0);
    CHECK(sc.lambda_max_phiphi < 0);
    CHECK(sc.stable);
}

TEST_CASE("electrode rows accumulate the boundary flux operator") {
    auto setup = app::pyramid_setup(7.5, 100, 16, 3);
    auto p = app::Pipeline::build(setup);
    REQUIRE(p->system.n_electrodes == 1);
    const int edof = p->system.n_dofs() - 1;
    // The electrode column must be nonzero and the matrix symmetric there.
    double colnorm = 0;
    for (int k = 0; k < p->system.A.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(p->system.A, k); it; ++it)
            if (it.col() == edof || it.row() == edof) colnorm += std::abs(it.value());
    CHECK(colnorm > 0);
    CHECK(p->system.A.coeff(edof, edof) == 0.0);
    CHECK(p->system.b(edof) == 0.0);
}

TEST_CASE("penalty bounds: empty without Dirichlet, alpha-matrix row sums, Rayleigh oracle") {
    auto setup = app::corner_study_setup(1.0, true, 100, 12, 3);
    auto p = app::Pipeline::build(setup);
    const auto m = build_material_set(setup.material);

    // An inner cell carries no constraint.
    for (std::size_t ci = 0; ci < p->cls.cells.size(); ++ci) {
        if (p->cls.cells[ci].tag != mesh::CellTag::Inner) continue;
        const auto b = sys::penalty_bounds_for_cell(p->cls.cells[ci], p->quad.cells[ci], *p->grid,
                                                    p->bcs, m);
        CHECK(!b.has_u);
        CHECK(!b.has_v);
        CHECK(!b.has_cu);
        break;
    }

    // A Dirichlet cut cell: alpha = 1 bounds are plain row sums, and the
    // largest generalized eigenvalue matches an independent Rayleigh ascent.
    for (std::size_t ci = 0; ci < p->cls.cells.size(); ++ci) {
        if (p->cls.cells[ci].tag != mesh::CellTag::Cut) continue;
        if (p->quad.cells[ci].boundary.empty()) continue;
        const auto b = sys::penalty_bounds_for_cell(p->cls.cells[ci], p->quad.cells[ci], *p->grid,
                                                    p->bcs, m);
        if (!b.has_u || b.unbounded) continue;
        CHECK(b.bound_u == doctest::Approx(b.Ku + b.Kv + b.Kcu).epsilon(1e-12));
        CHECK(b.bound_v == doctest::Approx(b.Ku + b.Kv + b.Kcu).epsilon(1e-12));

        // Independent oracle for K_u: maximize t^T B t / t^T V t by random
        // sampling plus gradient ascent, using only matrix products.
        const auto& info = p->cls.cells[ci];
        const auto fns = p->basis.functions_on_cell(info.cell.level, info.cell.cx, info.cell.cy);
        const int nu = 2 * static_cast<int>(fns.size());
        Eigen::MatrixXd V = Eigen::MatrixXd::Zero(nu, nu), Bu = Eigen::MatrixXd::Zero(nu, nu);
        std::vector<double> scratch[10];
        forms::PointBasis pb;
        for (const auto& q : p->quad.cells[ci].bulk) {
            sys::eval_point_basis(p->basis, fns, q.x, 5, scratch, pb);
            forms::LocalBlock lb;
            lb.init(static_cast<int>(fns.size()));
            forms::add_bulk_point(pb, m, Vector2d::Zero(), 0.0, q.w, lb);
            V += lb.K.topLeftCorner(nu, nu);
        }
        for (const auto& q : p->quad.cells[ci].boundary) {
            sys::eval_point_basis(p->basis, fns, q.x, 9, scratch, pb);
            const auto ops = forms::boundary_dof_ops(pb, q.frame, m);
            for (int i = 0; i < 2; ++i)
                Bu.noalias() += q.w * ops.t.row(i).head(nu).transpose() * ops.t.row(i).head(nu);
        }
        // Project out the (near) null space of V for admissible directions.
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ev(V);
        std::vector<int> keep;
        for (int i = 0; i < nu; ++i)
            if (ev.eigenvalues()(i) > 1e-12 * ev.eigenvalues().maxCoeff()) keep.push_back(i);
        Eigen::MatrixXd Q(nu, static_cast<Eigen::Index>(keep.size()));
        for (std::size_t k = 0; k < keep.size(); ++k) Q.col(static_cast<Eigen::Index>(k)) = ev.eigenvectors().col(keep[k]);
        const Eigen::MatrixXd Br = Q.transpose() * Bu * Q;
        const Eigen::MatrixXd Vr = Q.transpose() * V * Q;
        std::mt19937 rng(21);
        std::normal_distribution<double> g;
        double best = 0;
        Eigen::VectorXd tbest;
        for (int k = 0; k < 10000; ++k) {
            Eigen::VectorXd t(Br.rows());
            for (int i = 0; i < t.size(); ++i) t(i) = g(rng);
            const double r = t.dot(Br * t) / t.dot(Vr * t);
            if (r > best) {
                best = r;
                tbest = t;
            }
        }
        for (int it = 0; it < 500; ++it) {
            const double r = tbest.dot(Br * tbest) / tbest.dot(Vr * tbest);
            Eigen::VectorXd grad = 2 * (Br * tbest - r * (Vr * tbest)) / tbest.dot(Vr * tbest);
            tbest += 0.5 * tbest.norm() / (grad.norm() + 1e-300) * grad;
            best = std::max(best, tbest.dot(Br * tbest) / tbest.dot(Vr * tbest));
        }
        CHECK(best <= b.Ku * (1 + 1e-6));
        CHECK(best >= 0.95 * b.Ku);
        break;
    }
}

TEST_SUITE_END();
