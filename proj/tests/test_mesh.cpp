#include <doctest.h>

#include <cmath>

#include "flexo/app/cases.hpp"
#include "flexo/mesh/quadrature.hpp"

using namespace flexo;
using geom::Vector2d;

TEST_SUITE_BEGIN("mesh");

namespace {

struct Setup {
    std::shared_ptr<geom::BoundaryModel> boundary;
    spline::HierarchicalBasis basis = spline::HierarchicalBasis::make_uniform(3, 0, 0, 1, 1, 1);
    std::unique_ptr<mesh::EmbeddingGrid> grid;
    mesh::CellClassification cls;
    mesh::QuadratureScheme quad;
};

Setup make(std::shared_ptr<geom::BoundaryModel> bd, int cells, int degree = 3, double margin = 0.5) {
    Setup s;
    s.boundary = std::move(bd);
    Vector2d lo, hi;
    s.boundary->bbox(lo, hi);
    const double w = std::max(hi.x() - lo.x(), hi.y() - lo.y());
    const double h = w / (cells - 2 * margin);
    s.basis = spline::HierarchicalBasis::make_uniform(degree, lo.x() - margin * h, lo.y() - margin * h,
                                                      h, cells, cells);
    s.grid = std::make_unique<mesh::EmbeddingGrid>(s.basis, *s.boundary);
    s.cls = mesh::classify_cells(*s.grid);
    s.quad = mesh::build_quadrature(s.cls, *s.grid, degree + 1, degree + 1);
    return s;
}

}  // namespace

TEST_CASE("classification tags inner, cut and outer cells") {
    auto s = make(std::make_shared<geom::BoundaryModel>(app::circle_boundary(1.0)), 12);
    CHECK(s.cls.count(mesh::CellTag::Inner) > 0);
    CHECK(s.cls.count(mesh::CellTag::Cut) > 0);
    CHECK(s.cls.count(mesh::CellTag::Outer) > 0);
    for (const auto& info : s.cls.cells) {
        if (info.tag == mesh::CellTag::Cut) {
            CHECK(info.chi > 0.0);
            CHECK(info.chi < 1.0 + 1e-12);
        }
    }
}

TEST_CASE("margin violation is rejected") {
    auto bd = std::make_shared<geom::BoundaryModel>(app::circle_boundary(1.0));
    auto basis = spline::HierarchicalBasis::make_uniform(3, -1.0, -1.0, 0.25, 8, 8);  // box == bbox
    CHECK_THROWS(mesh::EmbeddingGrid(basis, *bd));
}

TEST_CASE("inner cell rule: 16 points summing to the cell area") {
    auto s = make(std::make_shared<geom::BoundaryModel>(app::square_boundary(1.0)), 8);
    for (std::size_t i = 0; i < s.cls.cells.size(); ++i) {
        if (s.cls.cells[i].tag != mesh::CellTag::Inner) continue;
        const auto& pts = s.quad.cells[i].bulk;
        CHECK(pts.size() == 16);
        double w = 0;
        for (const auto& p : pts) w += p.w;
        const double h = s.cls.cells[i].cell.size();
        CHECK(w == doctest::Approx(h * h).epsilon(1e-13));
        break;
    }
}

TEST_CASE("area closure: circle and square") {
    auto sq = make(std::make_shared<geom::BoundaryModel>(app::square_boundary(1.0)), 16);
    CHECK(sq.quad.total_area() == doctest::Approx(4.0).epsilon(1e-10));
    auto ci = make(std::make_shared<geom::BoundaryModel>(app::circle_boundary(1.0)), 16);
    CHECK(ci.quad.total_area() == doctest::Approx(M_PI).epsilon(1e-10));
    auto hо = make(std::make_shared<geom::BoundaryModel>(app::circle_with_square_hole(1.0, 0.4, M_PI / 6)), 16);
    CHECK(hо.quad.total_area() == doctest::Approx(M_PI - 0.16).epsilon(1e-10));
}

TEST_CASE("perimeter closure") {
    auto sq = make(std::make_shared<geom::BoundaryModel>(app::square_boundary(1.0)), 16);
    CHECK(sq.quad.total_boundary_length() == doctest::Approx(8.0).epsilon(1e-10));
    auto ci = make(std::make_shared<geom::BoundaryModel>(app::circle_boundary(1.0)), 16);
    CHECK(ci.quad.total_boundary_length() == doctest::Approx(2 * M_PI).epsilon(1e-10));
}

TEST_CASE("cut-cell weights are positive and points lie inside") {
    auto s = make(std::make_shared<geom::BoundaryModel>(app::circle_with_square_hole(1.0, 0.4, M_PI / 6)), 12);
    int checked = 0;
    for (std::size_t i = 0; i < s.cls.cells.size(); ++i) {
        if (s.cls.cells[i].tag != mesh::CellTag::Cut) continue;
        for (const auto& p : s.quad.cells[i].bulk) {
            CHECK(p.w > 0);
            if (checked < 400) {
                CHECK(s.boundary->classify(p.x) == geom::PointClass::Inside);
                ++checked;
            }
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("boundary frames at quadrature points satisfy the invariants") {
    auto s = make(std::make_shared<geom::BoundaryModel>(app::circle_boundary(1.0)), 10);
    for (std::size_t i = 0; i < s.cls.cells.size(); ++i) {
        for (const auto& bp : s.quad.cells[i].boundary) {
            CHECK(bp.frame.n.norm() == doctest::Approx(1.0).epsilon(1e-12));
            CHECK((bp.frame.S * bp.frame.n).norm() < 1e-10);
            CHECK(bp.w > 0);
        }
    }
}

TEST_CASE("corner ownership: square corners in exactly one cell each, circle none") {
    auto sq = make(std::make_shared<geom::BoundaryModel>(app::square_boundary(1.0)), 16);
    int owned = 0;
    for (const auto& cq : sq.quad.cells) owned += static_cast<int>(cq.corners.size());
    CHECK(owned == 4);
    auto ci = make(std::make_shared<geom::BoundaryModel>(app::circle_boundary(1.0)), 16);
    owned = 0;
    for (const auto& cq : ci.quad.cells) owned += static_cast<int>(cq.corners.size());
    CHECK(owned == 0);
}

TEST_CASE("grid-offset meshes reach the targeted minimum volume fractions") {
    // Boundary fraction f per axis puts f^2 in the corner cut cells.
    for (double target : {0.937, 0.009}) {
        const double f = std::sqrt(target);
        const int cells = 32;
        const double h = 2.0 / (cells - 2 + 2 * f);
        auto bd = std::make_shared<geom::BoundaryModel>(app::square_boundary(1.0));
        auto basis = spline::HierarchicalBasis::make_uniform(3, -1.0 - (1.0 - f) * h,
                                                             -1.0 - (1.0 - f) * h, h, cells, cells);
        mesh::EmbeddingGrid grid(basis, *bd);
        auto cls = mesh::classify_cells(grid);
        auto quad = mesh::build_quadrature(cls, grid, 4, 4);
        CHECK(cls.chi_min == doctest::Approx(target).epsilon(1e-6));
        CHECK(quad.total_area() == doctest::Approx(4.0).epsilon(1e-10));
    }
}

TEST_CASE("refining the basis never turns an interior cell outer") {
    auto bd = std::make_shared<geom::BoundaryModel>(app::circle_boundary(1.0));
    auto basis = spline::HierarchicalBasis::make_uniform(3, -1.2, -1.2, 2.4 / 11, 11, 11, 3);
    mesh::EmbeddingGrid g0(basis, *bd);
    auto c0 = mesh::classify_cells(g0);

    // Refine a couple of functions near the center.
    std::vector<spline::FnKey> marked;
    for (const auto& k : basis.functions()) {
        double xa, ya, xb, yb;
        basis.support(k, xa, ya, xb, yb);
        if (std::abs(xa + 0.2) < 0.3 && std::abs(ya + 0.2) < 0.3 && marked.size() < 2) marked.push_back(k);
    }
    REQUIRE(!marked.empty());
    auto refined = basis.refine(marked);
    mesh::EmbeddingGrid g1(refined, *bd);
    auto c1 = mesh::classify_cells(g1);
    // Every strictly interior level-0 cell stays covered by non-outer leaves.
    for (std::size_t i = 0; i < c0.cells.size(); ++i) {
        if (c0.cells[i].tag != mesh::CellTag::Inner) continue;
        const auto& cell = c0.cells[i].cell;
        const Vector2d c = 0.5 * (cell.lo + cell.hi);
        const int leaf = g1.leaf_containing(c);
        REQUIRE(leaf >= 0);
        CHECK(c1.cells[static_cast<size_t>(leaf)].tag != mesh::CellTag::Outer);
    }
}

TEST_CASE("half-plane diagonal cut: exact polygon area") {
    // A big triangle covering the box corner; cells inside see a straight cut.
    std::vector<geom::BoundaryChain> chains(1);
    const Vector2d a(0, 0), b(4, 0), c(0, 4);
    chains[0].segments.push_back({geom::NurbsCurve2D::line(a, b), "hyp"});
    chains[0].segments.push_back({geom::NurbsCurve2D::line(b, c), "hyp"});
    chains[0].segments.push_back({geom::NurbsCurve2D::line(c, a), "hyp"});
    auto bd = std::make_shared<geom::BoundaryModel>(std::move(chains));
    auto s = make(bd, 12);
    CHECK(s.quad.total_area() == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("circular arc cut matches the analytic segment area") {
    // One coarse cell cut by the circle; compare against the closed form.
    auto bd = std::make_shared<geom::BoundaryModel>(app::circle_boundary(1.0));
    auto basis = spline::HierarchicalBasis::make_uniform(3, -1.3, -1.3, 2.6 / 8, 8, 8);
    mesh::EmbeddingGrid grid(basis, *bd);
    auto cls = mesh::classify_cells(grid);
    auto quad = mesh::build_quadrature(cls, grid, 5, 5);
    // Global closure doubles as the per-cell check summed up.
    CHECK(quad.total_area() == doctest::Approx(M_PI).epsilon(1e-11));
    CHECK(quad.total_boundary_length() == doctest::Approx(2 * M_PI).epsilon(1e-11));
}

TEST_SUITE_END();
