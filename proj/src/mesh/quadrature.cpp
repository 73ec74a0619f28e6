#include "flexo/mesh/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "flexo/util/gauss.hpp"

namespace flexo::mesh {

namespace {

using geom::BoundaryModel;
using geom::CurvePiece;
using geom::NurbsCurve2D;

double cross2(const Vector2d& a, const Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }

// Directed boundary element of the physical part of a cell, traversed with
// the region on its left.
struct Elem {
    bool curved = false;
    Vector2d a = Vector2d::Zero(), b = Vector2d::Zero();  // endpoints
    int chain = 0, segment = 0;
    double t0 = 0, t1 = 0;
};

const NurbsCurve2D& curve_of(const BoundaryModel& bd, const Elem& e) {
    return bd.chain(e.chain).segments[static_cast<size_t>(e.segment)].curve;
}

double elem_area_term(const BoundaryModel& bd, const Elem& e) {
    if (!e.curved) return 0.5 * cross2(e.a, e.b);
    std::vector<double> pts, wts;
    util::gauss_legendre_01(16, pts, wts);
    const NurbsCurve2D& c = curve_of(bd, e);
    double s = 0;
    for (std::size_t q = 0; q < pts.size(); ++q) {
        const double t = e.t0 + (e.t1 - e.t0) * pts[q];
        s += 0.5 * cross2(c.eval(t), c.eval(t, 1)) * wts[q] * (e.t1 - e.t0);
    }
    return s;
}

// Fan triangle over one element with apex c; append mapped Gauss points.
// Returns false if the Jacobian is not strictly positive.
bool fan_triangle(const BoundaryModel& bd, const Elem& e, const Vector2d& c, int qt,
                  std::vector<BulkPoint>& out, std::vector<DisplayTri>& tris) {
    std::vector<double> pts, wts;
    util::gauss_legendre_01(qt, pts, wts);
    if (!e.curved) {
        const double jc = cross2(e.a - c, e.b - e.a);
        if (!(jc > 0)) return false;
        tris.push_back({c, e.a, e.b});
        for (std::size_t iu = 0; iu < pts.size(); ++iu) {
            for (std::size_t iv = 0; iv < pts.size(); ++iv) {
                const double u = pts[iu], v = pts[iv];
                const Vector2d x = c + u * ((1 - v) * e.a + v * e.b - c);
                out.push_back({x, wts[iu] * wts[iv] * u * jc});
            }
        }
        return true;
    }
    const NurbsCurve2D& cv = curve_of(bd, e);
    const double dt = e.t1 - e.t0;
    for (int s = 0; s < 4; ++s)
        tris.push_back({c, cv.eval(e.t0 + dt * s / 4.0), cv.eval(e.t0 + dt * (s + 1) / 4.0)});
    for (std::size_t iu = 0; iu < pts.size(); ++iu) {
        for (std::size_t iv = 0; iv < pts.size(); ++iv) {
            const double u = pts[iu], v = pts[iv];
            const double t = e.t0 + dt * v;
            const Vector2d g = cv.eval(t), g1 = cv.eval(t, 1);
            const double jc = dt * cross2(g - c, g1);
            if (!(jc > 0)) return false;
            const Vector2d x = c + u * (g - c);
            out.push_back({x, wts[iu] * wts[iv] * u * jc});
        }
    }
    return true;
}

struct CutResult {
    std::vector<BulkPoint> pts;
    std::vector<DisplayTri> tris;
    bool ok = false;
};

// Polygonize the physical part of the box from its boundary pieces plus the
// inside portions of the box edges, stitch closed loops, and fan-triangulate
// each loop. Falls back to 2x2 subdivision when the topology is ambiguous
// (non-star regions, loops of negative area, grazing contacts).
CutResult cut_region_points(const BoundaryModel& bd, const Vector2d& lo, const Vector2d& hi, int qt,
                            int depth) {
    CutResult res;
    const double h = hi.x() - lo.x();
    const auto pieces = bd.pieces_in_box(lo, hi);

    auto subdivide = [&]() -> CutResult {
        CutResult sub;
        if (depth >= 8) return sub;  // gives up; caller reports
        const Vector2d mid = 0.5 * (lo + hi);
        const Vector2d corners[4][2] = {{lo, mid},
                                        {Vector2d(mid.x(), lo.y()), Vector2d(hi.x(), mid.y())},
                                        {Vector2d(lo.x(), mid.y()), Vector2d(mid.x(), hi.y())},
                                        {mid, hi}};
        for (const auto& c : corners) {
            CutResult r = cut_region_points(bd, c[0], c[1], qt, depth + 1);
            if (!r.ok) return sub;
            sub.pts.insert(sub.pts.end(), r.pts.begin(), r.pts.end());
            sub.tris.insert(sub.tris.end(), r.tris.begin(), r.tris.end());
        }
        sub.ok = true;
        return sub;
    };

    if (pieces.empty()) {
        const auto pc = bd.classify(0.5 * (lo + hi));
        if (pc == geom::PointClass::OnBoundary) return subdivide();
        if (pc == geom::PointClass::Inside) {
            std::vector<double> pts, wts;
            util::gauss_legendre_01(qt, pts, wts);
            for (std::size_t i = 0; i < pts.size(); ++i)
                for (std::size_t j = 0; j < pts.size(); ++j)
                    res.pts.push_back({Vector2d(lo.x() + h * pts[i], lo.y() + (hi.y() - lo.y()) * pts[j]),
                                       wts[i] * wts[j] * h * (hi.y() - lo.y())});
            const Vector2d v10(hi.x(), lo.y()), v01(lo.x(), hi.y());
            res.tris.push_back({lo, v10, hi});
            res.tris.push_back({lo, hi, v01});
        }
        res.ok = true;
        return res;
    }

    const double tol = 1e-9 * h;
    std::vector<Elem> elems;
    for (const CurvePiece& p : pieces) {
        Elem e;
        e.curved = true;
        e.chain = p.chain;
        e.segment = p.segment;
        e.t0 = p.t0;
        e.t1 = p.t1;
        const NurbsCurve2D& c = bd.chain(p.chain).segments[static_cast<size_t>(p.segment)].curve;
        e.a = c.eval(p.t0);
        e.b = c.eval(p.t1);
        elems.push_back(e);
    }

    // Box edges in counterclockwise order, split at piece endpoints.
    const Vector2d v00 = lo, v10(hi.x(), lo.y()), v11 = hi, v01(lo.x(), hi.y());
    const Vector2d edge_a[4] = {v00, v10, v11, v01};
    const Vector2d edge_b[4] = {v10, v11, v01, v00};
    for (int ei = 0; ei < 4; ++ei) {
        const Vector2d a = edge_a[ei], b = edge_b[ei];
        const Vector2d d = b - a;
        const double len = d.norm();
        std::vector<double> cuts = {0.0, 1.0};
        for (const Elem& e : elems) {
            for (const Vector2d& q : {e.a, e.b}) {
                const double s = (q - a).dot(d) / (len * len);
                if (s > -1e-12 && s < 1.0 + 1e-12) {
                    const Vector2d foot = a + s * d;
                    if ((q - foot).norm() < tol) cuts.push_back(std::clamp(s, 0.0, 1.0));
                }
            }
        }
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            if (cuts[k + 1] - cuts[k] < 1e-12) continue;
            const double sm = 0.5 * (cuts[k] + cuts[k + 1]);
            const auto pc = bd.classify(a + sm * d);
            if (pc == geom::PointClass::OnBoundary) return subdivide();
            if (pc != geom::PointClass::Inside) continue;
            Elem e;
            e.curved = false;
            e.a = a + cuts[k] * d;
            e.b = a + cuts[k + 1] * d;
            elems.push_back(e);
        }
    }

    // Stitch directed elements into closed loops by endpoint matching.
    std::vector<bool> used(elems.size(), false);
    std::vector<std::vector<int>> loops;
    for (std::size_t start = 0; start < elems.size(); ++start) {
        if (used[start]) continue;
        std::vector<int> loop = {static_cast<int>(start)};
        used[start] = true;
        Vector2d cur = elems[start].b;
        bool closed = false;
        for (std::size_t guard = 0; guard <= elems.size(); ++guard) {
            if ((cur - elems[static_cast<size_t>(loop.front())].a).norm() < tol) {
                closed = true;
                break;
            }
            int next = -1;
            int matches = 0;
            for (std::size_t j = 0; j < elems.size(); ++j) {
                if (used[j]) continue;
                if ((elems[j].a - cur).norm() < tol) {
                    ++matches;
                    next = static_cast<int>(j);
                }
            }
            if (matches != 1) return subdivide();
            used[static_cast<size_t>(next)] = true;
            loop.push_back(next);
            cur = elems[static_cast<size_t>(next)].b;
        }
        if (!closed) return subdivide();
        loops.push_back(std::move(loop));
    }

    double area_total = 0;
    for (const auto& loop : loops) {
        double a_loop = 0;
        for (int ei : loop) a_loop += elem_area_term(bd, elems[static_cast<size_t>(ei)]);
        if (!(a_loop > 0)) return subdivide();
        area_total += a_loop;

        Vector2d c = Vector2d::Zero();
        int nc = 0;
        for (int ei : loop) {
            const Elem& e = elems[static_cast<size_t>(ei)];
            c += e.a + e.b;
            nc += 2;
            if (e.curved) {
                const NurbsCurve2D& cv = curve_of(bd, e);
                c += cv.eval(0.5 * (e.t0 + e.t1));
                nc += 1;
            }
        }
        c /= nc;

        std::vector<BulkPoint> loop_pts;
        std::vector<DisplayTri> loop_tris;
        bool good = true;
        for (int ei : loop)
            if (!fan_triangle(bd, elems[static_cast<size_t>(ei)], c, qt, loop_pts, loop_tris)) {
                good = false;
                break;
            }
        if (!good) return subdivide();
        res.pts.insert(res.pts.end(), loop_pts.begin(), loop_pts.end());
        res.tris.insert(res.tris.end(), loop_tris.begin(), loop_tris.end());
    }

    double wsum = 0;
    for (const BulkPoint& p : res.pts) wsum += p.w;
    if (std::abs(wsum - area_total) > 1e-8 * std::max(area_total, h * h)) return subdivide();

    res.ok = true;
    return res;
}

}  // namespace

std::vector<BulkPoint> bulk_rule_for_cell(const CellInfo& info, const BoundaryModel& bd, int q,
                                          std::vector<DisplayTri>* tris) {
    if (info.tag == CellTag::Outer) return {};
    if (info.tag == CellTag::Inner) {
        std::vector<double> pts, wts;
        util::gauss_legendre_01(q, pts, wts);
        const double hx = info.cell.hi.x() - info.cell.lo.x();
        const double hy = info.cell.hi.y() - info.cell.lo.y();
        std::vector<BulkPoint> out;
        out.reserve(static_cast<size_t>(q * q));
        for (int i = 0; i < q; ++i)
            for (int j = 0; j < q; ++j)
                out.push_back({Vector2d(info.cell.lo.x() + hx * pts[static_cast<size_t>(i)],
                                        info.cell.lo.y() + hy * pts[static_cast<size_t>(j)]),
                               wts[static_cast<size_t>(i)] * wts[static_cast<size_t>(j)] * hx * hy});
        if (tris) {
            const Vector2d v10(info.cell.hi.x(), info.cell.lo.y()), v01(info.cell.lo.x(), info.cell.hi.y());
            tris->push_back({info.cell.lo, v10, info.cell.hi});
            tris->push_back({info.cell.lo, info.cell.hi, v01});
        }
        return out;
    }
    CutResult r = cut_region_points(bd, info.cell.lo, info.cell.hi, q + 1, 0);
    if (!r.ok)
        throw std::runtime_error("bulk_rule_for_cell: could not resolve cut-cell topology at cell (" +
                                 std::to_string(info.cell.cx) + "," + std::to_string(info.cell.cy) + ") level " +
                                 std::to_string(info.cell.level));
    if (tris) tris->insert(tris->end(), r.tris.begin(), r.tris.end());
    return r.pts;
}

std::vector<BoundaryPoint> boundary_rule_for_cell(const CellInfo& info, const BoundaryModel& bd, int q) {
    std::vector<BoundaryPoint> out;
    std::vector<double> pts, wts;
    util::gauss_legendre_01(q, pts, wts);
    for (const CurvePiece& p : info.pieces) {
        const NurbsCurve2D& c = bd.chain(p.chain).segments[static_cast<size_t>(p.segment)].curve;
        const double dt = p.t1 - p.t0;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            BoundaryPoint bp;
            bp.t = p.t0 + dt * pts[k];
            bp.frame = bd.frame_at(p.chain, p.segment, bp.t);
            bp.x = bp.frame.x;
            bp.w = wts[k] * dt * c.eval(bp.t, 1).norm();
            bp.region_id = bd.region_id(p.chain, p.segment);
            bp.chain = p.chain;
            bp.segment = p.segment;
            out.push_back(bp);
        }
    }
    return out;
}

double QuadratureScheme::total_area() const {
    double a = 0;
    for (const CellQuadrature& c : cells)
        for (const BulkPoint& p : c.bulk) a += p.w;
    return a;
}

double QuadratureScheme::total_boundary_length() const {
    double l = 0;
    for (const CellQuadrature& c : cells)
        for (const BoundaryPoint& p : c.boundary) l += p.w;
    return l;
}

QuadratureScheme build_quadrature(CellClassification& cls, const EmbeddingGrid& grid, int q_bulk,
                                  int q_boundary) {
    const BoundaryModel& bd = grid.boundary();
    QuadratureScheme out;
    out.cells.resize(cls.cells.size());
    cls.chi_min = 1.0;

    for (std::size_t i = 0; i < cls.cells.size(); ++i) {
        CellInfo& info = cls.cells[i];
        if (info.tag == CellTag::Outer) continue;
        CellQuadrature& cq = out.cells[i];
        cq.bulk = bulk_rule_for_cell(info, bd, q_bulk);
        if (info.tag == CellTag::Cut) {
            double wsum = 0;
            for (const BulkPoint& p : cq.bulk) wsum += p.w;
            const double h2 = info.cell.size() * info.cell.size();
            if (wsum < 1e-14 * h2) {
                out.warnings.push_back("cell (" + std::to_string(info.cell.cx) + "," +
                                       std::to_string(info.cell.cy) + ") level " +
                                       std::to_string(info.cell.level) +
                                       ": sliver intersection, demoted to outer");
                info.tag = CellTag::Outer;
                info.chi = 0;
                cq = CellQuadrature{};
                continue;
            }
            info.chi = wsum / h2;
            cls.chi_min = std::min(cls.chi_min, info.chi);
            cq.boundary = boundary_rule_for_cell(info, bd, q_boundary);
        }
    }

    // Corner ownership: the lexicographically smallest cut cell whose closed
    // box contains the corner point.
    for (std::size_t ci = 0; ci < bd.corners().size(); ++ci) {
        const Vector2d& x = bd.corners()[ci].x;
        int best = -1;
        for (std::size_t i = 0; i < cls.cells.size(); ++i) {
            const CellInfo& info = cls.cells[i];
            if (info.tag != CellTag::Cut) continue;
            const double eps = 1e-12 * info.cell.size();
            if (x.x() >= info.cell.lo.x() - eps && x.x() <= info.cell.hi.x() + eps &&
                x.y() >= info.cell.lo.y() - eps && x.y() <= info.cell.hi.y() + eps) {
                if (best < 0) {
                    best = static_cast<int>(i);
                } else {
                    const LeafCell& a = cls.cells[static_cast<size_t>(best)].cell;
                    const LeafCell& b = info.cell;
                    if (std::array<int, 3>{b.level, b.cx, b.cy} < std::array<int, 3>{a.level, a.cx, a.cy})
                        best = static_cast<int>(i);
                }
            }
        }
        if (best < 0) {
            out.warnings.push_back("corner " + std::to_string(ci) + " has no owning cut cell");
            continue;
        }
        out.cells[static_cast<size_t>(best)].corners.push_back(static_cast<int>(ci));
    }
    return out;
}

}  // namespace flexo::mesh
