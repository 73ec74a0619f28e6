#include "flexo/app/cases.hpp"

#include <cmath>

#include "flexo/forms/constitutive.hpp"

namespace flexo::app {

using geom::BoundaryChain;
using geom::BoundaryModel;
using geom::NurbsCurve2D;
using geom::Vector2d;

namespace {

BoundaryChain polygon_chain(const std::vector<Vector2d>& pts, const std::vector<std::string>& regions) {
    BoundaryChain ch;
    for (std::size_t k = 0; k < pts.size(); ++k)
        ch.segments.push_back({NurbsCurve2D::line(pts[k], pts[(k + 1) % pts.size()]), regions[k]});
    return ch;
}

std::vector<geom::CornerOverride> named_square_corners(int chain) {
    // Junction j closes segment j; with bottom,right,top,left order the
    // corner names follow counterclockwise from bottom-right.
    return {{chain, 0, true, "br"}, {chain, 1, true, "tr"}, {chain, 2, true, "tl"}, {chain, 3, true, "bl"}};
}

}  // namespace

BoundaryModel square_boundary(double half) { return rectangle_boundary(-half, -half, half, half); }

BoundaryModel rectangle_boundary(double xa, double ya, double xb, double yb) {
    const std::vector<Vector2d> pts = {{xa, ya}, {xb, ya}, {xb, yb}, {xa, yb}};
    return BoundaryModel({polygon_chain(pts, {"bottom", "right", "top", "left"})},
                         1.0 * M_PI / 180.0, named_square_corners(0));
}

BoundaryModel circle_boundary(double radius) {
    BoundaryChain ch;
    for (int k = 0; k < 4; ++k) {
        const double a0 = -M_PI / 4 + k * M_PI / 2;
        ch.segments.push_back({NurbsCurve2D::arc(Vector2d::Zero(), radius, a0, a0 + M_PI / 2), "outer"});
    }
    return BoundaryModel({ch});
}

BoundaryModel circle_with_square_hole(double radius, double hole_side, double angle) {
    BoundaryChain outer;
    for (int k = 0; k < 4; ++k) {
        const double a0 = -M_PI / 4 + k * M_PI / 2;
        outer.segments.push_back({NurbsCurve2D::arc(Vector2d::Zero(), radius, a0, a0 + M_PI / 2), "outer"});
    }
    const double h = hole_side / 2;
    const double c = std::cos(angle), s = std::sin(angle);
    auto rot = [&](double x, double y) { return Vector2d(c * x - s * y, s * x + c * y); };
    const std::vector<Vector2d> pts = {rot(-h, -h), rot(h, -h), rot(h, h), rot(-h, h)};
    BoundaryChain hole = polygon_chain(pts, {"hole", "hole", "hole", "hole"});
    return BoundaryModel({outer, hole});
}

BoundaryModel trapezoid_boundary(double half_bottom, double half_top, double height) {
    const std::vector<Vector2d> pts = {
        {-half_bottom, 0}, {half_bottom, 0}, {half_top, height}, {-half_top, height}};
    return BoundaryModel({polygon_chain(pts, {"bottom", "right", "top", "left"})},
                         1.0 * M_PI / 180.0, named_square_corners(0));
}

PolyReference::PolyReference(Eigen::MatrixXd u1, Eigen::MatrixXd u2, Eigen::MatrixXd phi) {
    c_[0] = std::move(u1);
    c_[1] = std::move(u2);
    c_[2] = std::move(phi);
}

namespace {
double poly_eval(const Eigen::MatrixXd& c, int dx, int dy, double x, double y) {
    double v = 0;
    for (int i = dx; i < c.rows(); ++i) {
        double fi = 1;
        for (int k = 0; k < dx; ++k) fi *= i - k;
        for (int j = dy; j < c.cols(); ++j) {
            if (c(i, j) == 0) continue;
            double fj = 1;
            for (int k = 0; k < dy; ++k) fj *= j - k;
            v += c(i, j) * fi * fj * std::pow(x, i - dx) * std::pow(y, j - dy);
        }
    }
    return v;
}
}  // namespace

double PolyReference::u(int comp, int dx, int dy, const Eigen::Vector2d& x) const {
    return poly_eval(c_[comp], dx, dy, x.x(), x.y());
}
double PolyReference::phi(int dx, int dy, const Eigen::Vector2d& x) const {
    return poly_eval(c_[2], dx, dy, x.x(), x.y());
}

std::shared_ptr<post::ReferenceSolution> corner_study_reference() {
    // u1 = x1 + x1^2 - 2 x1 x2 + x1^3 - 3 x1 x2^2 + x1^2 x2
    // u2 = -x2 + x2^2 - 2 x1 x2 + x2^3 - 3 x1^2 x2 - x1 x2^2
    // phi = x1^3 + x2^2 - 2 x1^2 x2
    Eigen::MatrixXd u1 = Eigen::MatrixXd::Zero(4, 4), u2 = Eigen::MatrixXd::Zero(4, 4),
                    ph = Eigen::MatrixXd::Zero(4, 4);
    u1(1, 0) = 1;
    u1(2, 0) = 1;
    u1(1, 1) = -2;
    u1(3, 0) = 1;
    u1(1, 2) = -3;
    u1(2, 1) = 1;
    u2(0, 1) = -1;
    u2(0, 2) = 1;
    u2(1, 1) = -2;
    u2(0, 3) = 1;
    u2(2, 1) = -3;
    u2(1, 2) = -1;
    ph(3, 0) = 1;
    ph(0, 2) = 1;
    ph(2, 1) = -2;
    return std::make_shared<PolyReference>(u1, u2, ph);
}

namespace {

class SinusoidReference : public post::ReferenceSolution {
public:
    double u(int comp, int dx, int dy, const Eigen::Vector2d& x) const override {
        if (comp == 0) return dy > 0 ? 0.0 : dsin(M_PI, x.x(), dx);
        return dx > 0 ? 0.0 : dsin(M_PI, x.y(), dy);
    }
    double phi(int dx, int dy, const Eigen::Vector2d& x) const override {
        if (dx > 0 && dy > 0) return 0.0;
        if (dx > 0) return dsin(M_PI / 10, x.x(), dx);
        if (dy > 0) return dsin(M_PI / 10, x.y(), dy);
        return dsin(M_PI / 10, x.x(), 0) + dsin(M_PI / 10, x.y(), 0);
    }

private:
    static double dsin(double k, double x, int d) { return std::pow(k, d) * std::sin(k * x + d * M_PI / 2); }
};

}  // namespace

std::shared_ptr<post::ReferenceSolution> sinusoid_reference() { return std::make_shared<SinusoidReference>(); }

sys::LoadFns manufactured_loads(std::shared_ptr<post::ReferenceSolution> ref,
                                const mat::MaterialSet& m) {
    sys::LoadFns loads;
    auto eps_d = [ref](int i, int j, int dx, int dy, const Eigen::Vector2d& x) {
        // derivative (dx, dy) of eps_ij
        const int adx = dx + (j == 0), ady = dy + (j == 1);
        const int bdx = dx + (i == 0), bdy = dy + (i == 1);
        return 0.5 * (ref->u(i, adx, ady, x) + ref->u(j, bdx, bdy, x));
    };
    loads.body_force = [ref, m, eps_d](const Eigen::Vector2d& x) {
        Eigen::Vector2d b = Eigen::Vector2d::Zero();
        for (int i = 0; i < 2; ++i) {
            double div_sh = 0;  // sigma^_ij,j
            for (int j = 0; j < 2; ++j) {
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l)
                        div_sh += m.C(i, j, k, l) * eps_d(k, l, (j == 0) ? 1 : 0, (j == 1) ? 1 : 0, x);
                for (int l = 0; l < 2; ++l)
                    div_sh += m.e(l, i, j) * ref->phi((l == 0) + (j == 0), (l == 1) + (j == 1), x);
            }
            double div2_st = 0;  // sigma~_ijk,kj
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) {
                    const int ddx = (j == 0) + (k == 0), ddy = (j == 1) + (k == 1);
                    for (int l = 0; l < 2; ++l)
                        for (int a = 0; a < 2; ++a)
                            for (int nn = 0; nn < 2; ++nn)
                                div2_st += m.h(i, j, k, l, a, nn) *
                                           eps_d(l, a, ddx + (nn == 0), ddy + (nn == 1), x);
                    for (int l = 0; l < 2; ++l)
                        div2_st += m.mu(l, i, j, k) * ref->phi(ddx + (l == 0), ddy + (l == 1), x);
                }
            b(i) = -div_sh + div2_st;
        }
        return b;
    };
    loads.free_charge = [ref, m, eps_d](const Eigen::Vector2d& x) {
        double q = 0;  // D^_l,l
        for (int l = 0; l < 2; ++l) {
            for (int mm = 0; mm < 2; ++mm) q -= m.kappa(l, mm) * ref->phi((mm == 0) + (l == 0), (mm == 1) + (l == 1), x);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) q += m.e(l, i, j) * eps_d(i, j, l == 0, l == 1, x);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    for (int k = 0; k < 2; ++k)
                        q += m.mu(l, i, j, k) * eps_d(i, j, (k == 0) + (l == 0), (k == 1) + (l == 1), x);
        }
        return q;
    };
    return loads;
}

forms::VectorData reference_u_data(std::shared_ptr<post::ReferenceSolution> ref) {
    return [ref](const Eigen::Vector2d& x, const geom::BoundaryFrame*) {
        return Eigen::Vector2d(ref->u(0, 0, 0, x), ref->u(1, 0, 0, x));
    };
}

forms::VectorData reference_v_data(std::shared_ptr<post::ReferenceSolution> ref) {
    return [ref](const Eigen::Vector2d& x, const geom::BoundaryFrame* fr) {
        if (!fr) return Eigen::Vector2d::Zero().eval();
        Eigen::Vector2d v = Eigen::Vector2d::Zero();
        for (int c = 0; c < 2; ++c)
            v(c) = ref->u(c, 1, 0, x) * fr->n(0) + ref->u(c, 0, 1, x) * fr->n(1);
        return v;
    };
}

forms::ScalarData reference_phi_data(std::shared_ptr<post::ReferenceSolution> ref) {
    return [ref](const Eigen::Vector2d& x, const geom::BoundaryFrame*) { return ref->phi(0, 0, x); };
}

}  // namespace flexo::app
