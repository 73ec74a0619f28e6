#include <doctest.h>

#include <cmath>
#include <random>

#include "flexo/app/cases.hpp"
#include "flexo/geom/boundary_io.hpp"
#include "flexo/geom/boundary_model.hpp"

using namespace flexo;
using geom::BoundaryModel;
using geom::NurbsCurve2D;
using geom::Vector2d;

TEST_SUITE_BEGIN("geometry");

TEST_CASE("quarter circle arc as rational quadratic") {
    const auto arc = NurbsCurve2D::arc(Vector2d(0, 0), 2.0, 0.0, M_PI / 2);
    CHECK(arc.weights()[1] == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-14));
    for (double t : {0.0, 0.1, 0.33, 0.5, 0.77, 1.0}) {
        CHECK(arc.eval(t).norm() == doctest::Approx(2.0).epsilon(1e-12));
    }
    // Derivatives by quotient rule vs central differences.
    for (double t : {0.2, 0.5, 0.8}) {
        const double h = 1e-6;
        const Vector2d fd1 = (arc.eval(t + h) - arc.eval(t - h)) / (2 * h);
        CHECK((arc.eval(t, 1) - fd1).norm() < 1e-8 * arc.eval(t, 1).norm());
        const Vector2d fd2 = (arc.eval(t + h, 1) - arc.eval(t - h, 1)) / (2 * h);
        CHECK((arc.eval(t, 2) - fd2).norm() < 1e-6 * std::max(1.0, arc.eval(t, 2).norm()));
    }
}

TEST_CASE("unit-weight rational curve degenerates to a polynomial one") {
    const NurbsCurve2D c(2, {0, 0, 0, 1, 1, 1}, {{0, 0}, {1, 2}, {2, 0}}, {1, 1, 1});
    for (double t : {0.0, 0.25, 0.5, 0.9}) {
        // Quadratic Bezier with these control points.
        const Vector2d b = (1 - t) * (1 - t) * Vector2d(0, 0) + 2 * t * (1 - t) * Vector2d(1, 2) +
                           t * t * Vector2d(2, 0);
        CHECK((c.eval(t) - b).norm() < 1e-14);
    }
    const auto line = NurbsCurve2D::line(Vector2d(1, 1), Vector2d(3, 2));
    CHECK(line.eval(0.37, 2).norm() == doctest::Approx(0.0));
}

TEST_CASE("circle frames: shape operator, mean curvature, geometry tensor") {
    const double R = 1.7;
    const auto model = app::circle_boundary(R);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dist(0.05, 0.95);
    for (int seg = 0; seg < 4; ++seg) {
        for (int k = 0; k < 32; ++k) {
            const auto& curve = model.chain(0).segments[static_cast<size_t>(seg)].curve;
            const double t = curve.t_begin() + dist(rng) * (curve.t_end() - curve.t_begin());
            const auto fr = model.frame_at(0, seg, t);
            CHECK(fr.n.norm() == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(std::abs(fr.n.dot(fr.m)) < 1e-12);
            // Outward normal points away from the center.
            CHECK(fr.n.dot(fr.x) == doctest::Approx(R).epsilon(1e-10));
            // S = -(1/R) P, H = -1/(2R), N~ = (2 n n^T - I)/R.
            CHECK((fr.S + fr.P / R).norm() < 1e-10);
            CHECK(fr.H == doctest::Approx(-1.0 / (2 * R)).epsilon(1e-10));
            const Eigen::Matrix2d nt = (2 * fr.n * fr.n.transpose() - Eigen::Matrix2d::Identity()) / R;
            CHECK((fr.Ntilde - nt).norm() < 1e-10);
            // Tangency invariants.
            CHECK((fr.S * fr.n).norm() < 1e-12 / R);
            CHECK(fr.S.trace() == doctest::Approx(2 * fr.H).epsilon(1e-12));
        }
    }
}

TEST_CASE("straight edges carry zero curvature") {
    const auto model = app::square_boundary(1.0);
    const auto fr = model.frame_at(0, 0, 0.5);
    CHECK(fr.S.norm() == doctest::Approx(0.0));
    CHECK(fr.H == doctest::Approx(0.0));
    CHECK(fr.Ntilde.norm() == doctest::Approx(0.0));
}

TEST_CASE("corner detection: square has 4, circle none, smooth junction cancels") {
    const auto square = app::square_boundary(1.0);
    REQUIRE(square.corners().size() == 4);
    for (const auto& c : square.corners()) {
        CHECK(std::abs(c.incoming.n.dot(c.outgoing.n)) < 1e-12);  // perpendicular one-sided normals
        CHECK(std::abs(c.incoming.m.dot(c.incoming.n)) < 1e-12);
    }
    const auto circle = app::circle_boundary(1.0);
    CHECK(circle.corners().empty());

    // At a C1 junction of two arcs the jump m (x) n vanishes.
    const auto& seg0 = circle.chain(0).segments[0].curve;
    const auto& seg1 = circle.chain(0).segments[1].curve;
    const Vector2d t_end = seg0.eval(seg0.t_end(), 1).normalized();
    const Vector2d t_start = seg1.eval(seg1.t_begin(), 1).normalized();
    geom::CornerSide in{t_end, Vector2d(t_end.y(), -t_end.x())};
    geom::CornerSide out{-t_start, Vector2d(t_start.y(), -t_start.x())};
    const Eigen::Matrix2d jump =
        in.m * in.n.transpose() + out.m * out.n.transpose();
    CHECK(jump.norm() < 1e-12);
}

TEST_CASE("point classification against analytic containment") {
    const double R = 1.0, side = 0.4, ang = 30.0 * M_PI / 180.0;
    const auto model = app::circle_with_square_hole(R, side, ang);
    auto analytic = [&](const Vector2d& x) {
        if (x.norm() >= R) return false;
        // Rotate back and test the square.
        const double c = std::cos(-ang), s = std::sin(-ang);
        const Vector2d r(c * x.x() - s * x.y(), s * x.x() + c * x.y());
        const bool in_hole = std::abs(r.x()) <= side / 2 && std::abs(r.y()) <= side / 2;
        return !in_hole;
    };
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> dist(-1.2, 1.2);
    int mismatches = 0, tested = 0;
    for (int k = 0; k < 10000; ++k) {
        const Vector2d x(dist(rng), dist(rng));
        if (model.distance(x) < 1e-10) continue;  // skip the tolerance band
        ++tested;
        const bool inside = model.classify(x) == geom::PointClass::Inside;
        if (inside != analytic(x)) ++mismatches;
    }
    CHECK(tested > 9000);
    CHECK(mismatches == 0);

    CHECK(app::circle_boundary(1.0).classify(Vector2d(0, 0)) == geom::PointClass::Inside);
    CHECK(app::circle_boundary(1.0).classify(Vector2d(2, 0)) == geom::PointClass::Outside);
    // A point in the hole is outside the physical domain.
    CHECK(model.classify(Vector2d(0.05, 0.05)) == geom::PointClass::Outside);
    CHECK(model.classify(Vector2d(1e-4, 0.0)) == geom::PointClass::Outside);
}

TEST_CASE("perimeter of circle and square") {
    CHECK(app::circle_boundary(1.5).perimeter() == doctest::Approx(2 * M_PI * 1.5).epsilon(1e-12));
    CHECK(app::square_boundary(1.0).perimeter() == doctest::Approx(8.0).epsilon(1e-13));
}

TEST_CASE("pieces_in_box splits and labels boundary portions") {
    const auto model = app::square_boundary(1.0);
    // Box straddling the bottom-right corner of the square.
    const auto pieces = model.pieces_in_box(Vector2d(0.8, -1.2), Vector2d(1.2, -0.8));
    REQUIRE(pieces.size() == 2);
    double len = 0;
    for (const auto& p : pieces) {
        const auto& c = model.chain(p.chain).segments[static_cast<size_t>(p.segment)].curve;
        len += (c.eval(p.t1) - c.eval(p.t0)).norm();
    }
    CHECK(len == doctest::Approx(0.4).epsilon(1e-10));
}

TEST_CASE("boundary file round trip") {
    const std::string text = R"(
# a unit square with one forced corner name
chain
segment region=south
  degree 1
  knots 0 0 1 1
  cp 0 0 1
  cp 1 0 1
segment region=east
  degree 1
  knots 0 0 1 1
  cp 1 0 1
  cp 1 1 1
segment region=north
  degree 1
  knots 0 0 1 1
  cp 1 1 1
  cp 0 1 1
segment region=west
  degree 1
  knots 0 0 1 1
  cp 0 1 1
  cp 0 0 1
corner after=0 name=se
)";
    const auto bf = geom::parse_boundary_text(text);
    REQUIRE(bf.chains.size() == 1);
    REQUIRE(bf.chains[0].segments.size() == 4);
    BoundaryModel model(bf.chains, 1.0 * M_PI / 180.0, bf.overrides);
    CHECK(model.corners().size() == 4);
    bool found = false;
    for (const auto& c : model.corners())
        if (c.name == "se") found = true;
    CHECK(found);
    CHECK(model.region_id("north") >= 0);

    const std::string ser = geom::serialize_boundary(model);
    const auto bf2 = geom::parse_boundary_text(ser);
    BoundaryModel model2(bf2.chains);
    CHECK(model2.perimeter() == doctest::Approx(model.perimeter()).epsilon(1e-14));
}

TEST_CASE("orientation normalization flips reversed chains") {
    // Clockwise outer square normalizes to counterclockwise (outward normals).
    std::vector<geom::BoundaryChain> chains(1);
    const Vector2d pts[4] = {{0, 0}, {0, 1}, {1, 1}, {1, 0}};  // clockwise
    for (int k = 0; k < 4; ++k)
        chains[0].segments.push_back({NurbsCurve2D::line(pts[k], pts[(k + 1) % 4]), "s"});
    BoundaryModel model(std::move(chains));
    const auto fr = model.frame_at(0, 0, 0.5);
    // Outward normal must point away from the interior.
    const Vector2d center(0.5, 0.5);
    CHECK((fr.x + 0.01 * fr.n - center).norm() > (fr.x - center).norm());
}

TEST_SUITE_END();
