#include "flexo/geom/boundary_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "flexo/util/gauss.hpp"

namespace flexo::geom {

namespace {

double cross2(const Vector2d& a, const Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }

// Roots of a scalar function of the curve parameter on [t0, t1], located by
// uniform bracketing and bisection.
template <typename F>
void scalar_roots(const F& g, double t0, double t1, int samples, std::vector<double>& out) {
    double prev_t = t0, prev_g = g(t0);
    for (int k = 1; k <= samples; ++k) {
        const double t = t0 + (t1 - t0) * k / samples;
        const double gt = g(t);
        if ((prev_g < 0 && gt > 0) || (prev_g > 0 && gt < 0)) {
            double a = prev_t, b = t, ga = prev_g;
            for (int it = 0; it < 80; ++it) {
                const double m = 0.5 * (a + b);
                const double gm = g(m);
                if ((ga < 0 && gm < 0) || (ga > 0 && gm > 0)) {
                    a = m;
                    ga = gm;
                } else {
                    b = m;
                }
            }
            out.push_back(0.5 * (a + b));
        } else if (prev_g == 0.0) {
            out.push_back(prev_t);
        }
        prev_t = t;
        prev_g = gt;
    }
    if (prev_g == 0.0) out.push_back(t1);
}

}  // namespace

BoundaryModel::BoundaryModel(std::vector<BoundaryChain> chains, double corner_angle_tol,
                             const std::vector<CornerOverride>& overrides)
    : chains_(std::move(chains)) {
    if (chains_.empty()) throw std::invalid_argument("BoundaryModel: no chains");
    for (const BoundaryChain& c : chains_)
        if (c.segments.empty()) throw std::invalid_argument("BoundaryModel: empty chain");

    lo_ = Vector2d(1e300, 1e300);
    hi_ = Vector2d(-1e300, -1e300);
    for (const BoundaryChain& c : chains_)
        for (const BoundarySegment& s : c.segments)
            for (const Vector2d& p : s.curve.control()) {
                lo_ = lo_.cwiseMin(p);
                hi_ = hi_.cwiseMax(p);
            }

    const double tol = 1e-12 * diameter();
    for (std::size_t ci = 0; ci < chains_.size(); ++ci) {
        const auto& segs = chains_[ci].segments;
        for (std::size_t k = 0; k < segs.size(); ++k) {
            const Vector2d e = segs[k].curve.eval(segs[k].curve.t_end());
            const auto& nxt = segs[(k + 1) % segs.size()].curve;
            if ((e - nxt.eval(nxt.t_begin())).norm() > tol)
                throw std::invalid_argument("BoundaryModel: chain is not closed");
        }
    }

    build_samples();
    normalize_orientation();
    build_samples();
    refine_bbox();
    detect_corners(corner_angle_tol, overrides);

    regions_.clear();
    region_of_.assign(chains_.size(), {});
    for (std::size_t ci = 0; ci < chains_.size(); ++ci) {
        for (const BoundarySegment& s : chains_[ci].segments) {
            auto it = std::find(regions_.begin(), regions_.end(), s.region);
            int id;
            if (it == regions_.end()) {
                id = static_cast<int>(regions_.size());
                regions_.push_back(s.region);
            } else {
                id = static_cast<int>(it - regions_.begin());
            }
            region_of_[ci].push_back(id);
        }
    }
}

void BoundaryModel::refine_bbox() {
    // Control points overestimate rational-arc extents; tighten from the
    // curve itself (sampled bracket, golden refinement per coordinate).
    Vector2d lo(1e300, 1e300), hi(-1e300, -1e300);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    for (std::size_t ci = 0; ci < chains_.size(); ++ci) {
        for (std::size_t si = 0; si < chains_[ci].segments.size(); ++si) {
            const NurbsCurve2D& c = chains_[ci].segments[si].curve;
            const auto& smp = samples_[ci][si];
            for (int axis = 0; axis < 2; ++axis) {
                for (int sign = -1; sign <= 1; sign += 2) {
                    std::size_t best = 0;
                    double fb = -1e300;
                    for (std::size_t k = 0; k < smp.size(); ++k) {
                        const double v = sign * smp[k].x[axis];
                        if (v > fb) {
                            fb = v;
                            best = k;
                        }
                    }
                    double a = smp[best > 0 ? best - 1 : 0].t;
                    double b = smp[std::min(best + 1, smp.size() - 1)].t;
                    double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
                    double f1 = sign * c.eval(c1)[axis], f2 = sign * c.eval(c2)[axis];
                    for (int it = 0; it < 60; ++it) {
                        if (f1 > f2) {
                            b = c2;
                            c2 = c1;
                            f2 = f1;
                            c1 = b - gr * (b - a);
                            f1 = sign * c.eval(c1)[axis];
                        } else {
                            a = c1;
                            c1 = c2;
                            f1 = f2;
                            c2 = a + gr * (b - a);
                            f2 = sign * c.eval(c2)[axis];
                        }
                    }
                    const double ext = std::max(fb, std::max(f1, f2));
                    if (sign > 0)
                        hi[axis] = std::max(hi[axis], ext);
                    else
                        lo[axis] = std::min(lo[axis], -ext);
                }
            }
        }
    }
    lo_ = lo;
    hi_ = hi;
}

void BoundaryModel::build_samples() {
    samples_.assign(chains_.size(), {});
    for (std::size_t ci = 0; ci < chains_.size(); ++ci) {
        samples_[ci].resize(chains_[ci].segments.size());
        for (std::size_t si = 0; si < chains_[ci].segments.size(); ++si) {
            const NurbsCurve2D& c = chains_[ci].segments[si].curve;
            const auto bp = c.breakpoints();
            auto& smp = samples_[ci][si];
            smp.clear();
            for (std::size_t b = 0; b + 1 < bp.size(); ++b) {
                const int k = 24;
                for (int q = 0; q <= k; ++q) {
                    if (b > 0 && q == 0) continue;
                    const double t = bp[b] + (bp[b + 1] - bp[b]) * q / k;
                    smp.push_back({t, c.eval(t)});
                }
            }
        }
    }
}

void BoundaryModel::normalize_orientation() {
    std::vector<double> pts, wts;
    util::gauss_legendre_01(8, pts, wts);

    auto signed_area = [&](const BoundaryChain& ch) {
        double a = 0;
        for (const BoundarySegment& s : ch.segments) {
            const auto bp = s.curve.breakpoints();
            for (std::size_t b = 0; b + 1 < bp.size(); ++b) {
                for (std::size_t q = 0; q < pts.size(); ++q) {
                    const double t = bp[b] + (bp[b + 1] - bp[b]) * pts[q];
                    const Vector2d x = s.curve.eval(t);
                    const Vector2d d = s.curve.eval(t, 1);
                    a += 0.5 * cross2(x, d) * wts[q] * (bp[b + 1] - bp[b]);
                }
            }
        }
        return a;
    };

    // Even-odd parity of a point against the sampled polyline of one chain.
    auto inside_polyline = [&](const Vector2d& q, std::size_t ci) {
        bool in = false;
        for (const auto& seg : samples_[ci]) {
            for (std::size_t k = 0; k + 1 < seg.size(); ++k) {
                const Vector2d& a = seg[k].x;
                const Vector2d& b = seg[k + 1].x;
                if ((a.y() > q.y()) != (b.y() > q.y())) {
                    const double xc = a.x() + (q.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
                    if (q.x() < xc) in = !in;
                }
            }
        }
        return in;
    };

    for (std::size_t ci = 0; ci < chains_.size(); ++ci) {
        int depth = 0;
        const Vector2d probe = samples_[ci][0][samples_[ci][0].size() / 2].x;
        for (std::size_t cj = 0; cj < chains_.size(); ++cj)
            if (cj != ci && inside_polyline(probe, cj)) ++depth;
        const double area = signed_area(chains_[ci]);
        const bool want_ccw = (depth % 2 == 0);
        if ((area > 0) != want_ccw) {
            auto& segs = chains_[ci].segments;
            std::reverse(segs.begin(), segs.end());
            for (BoundarySegment& s : segs) s.curve = s.curve.reversed();
        }
    }
}

void BoundaryModel::detect_corners(double angle_tol, const std::vector<CornerOverride>& overrides) {
    corners_.clear();
    std::map<std::pair<int, int>, const CornerOverride*> omap;
    for (const CornerOverride& o : overrides) omap[{o.chain, o.junction}] = &o;

    for (int ci = 0; ci < num_chains(); ++ci) {
        const auto& segs = chains_[static_cast<size_t>(ci)].segments;
        const int n = static_cast<int>(segs.size());
        for (int j = 0; j < n; ++j) {
            const NurbsCurve2D& a = segs[static_cast<size_t>(j)].curve;
            const NurbsCurve2D& b = segs[static_cast<size_t>((j + 1) % n)].curve;
            const Vector2d ta = a.eval(a.t_end(), 1).normalized();
            const Vector2d tb = b.eval(b.t_begin(), 1).normalized();
            const double ang = std::atan2(std::abs(cross2(ta, tb)), ta.dot(tb));
            bool is_corner = ang > angle_tol;
            std::string name;
            auto it = omap.find({ci, j});
            if (it != omap.end()) {
                is_corner = it->second->is_corner;
                name = it->second->name;
            }
            if (!is_corner) continue;
            Corner c;
            c.chain = ci;
            c.junction = j;
            c.x = a.eval(a.t_end());
            c.incoming.m = ta;
            c.incoming.n = Vector2d(ta.y(), -ta.x());
            c.outgoing.m = -tb;
            c.outgoing.n = Vector2d(tb.y(), -tb.x());
            c.name = name;
            corners_.push_back(c);
        }
    }
}

int BoundaryModel::region_id(int chain, int segment) const {
    return region_of_[static_cast<size_t>(chain)][static_cast<size_t>(segment)];
}

int BoundaryModel::region_id(const std::string& name) const {
    auto it = std::find(regions_.begin(), regions_.end(), name);
    return it == regions_.end() ? -1 : static_cast<int>(it - regions_.begin());
}

BoundaryFrame BoundaryModel::frame_at(int chain, int segment, double t) const {
    const NurbsCurve2D& c = chains_[static_cast<size_t>(chain)].segments[static_cast<size_t>(segment)].curve;
    const Vector2d d1 = c.eval(t, 1);
    const double speed = d1.norm();
    if (speed < 1e-300 || speed < 1e-14 * diameter())
        throw std::runtime_error("BoundaryModel::frame_at: degenerate parametrization (zero tangent)");
    const Vector2d d2 = c.eval(t, 2);

    BoundaryFrame f;
    f.x = c.eval(t);
    f.m = d1 / speed;
    f.n = Vector2d(f.m.y(), -f.m.x());
    f.P = Matrix2d::Identity() - f.n * f.n.transpose();
    // S = -grad_S n = kn * m m^T with kn = (n . gamma'') / |gamma'|^2.
    const double kn = f.n.dot(d2) / (speed * speed);
    f.S = kn * (f.m * f.m.transpose());
    f.H = 0.5 * kn;
    f.Ntilde = f.S - 2.0 * f.H * (f.n * f.n.transpose());
    return f;
}

double BoundaryModel::distance(const Vector2d& x) const {
    double best = 1e300;
    for (std::size_t ci = 0; ci < chains_.size(); ++ci) {
        for (std::size_t si = 0; si < chains_[ci].segments.size(); ++si) {
            const auto& smp = samples_[ci][si];
            const NurbsCurve2D& c = chains_[ci].segments[si].curve;
            std::size_t ib = 0;
            double db = 1e300;
            for (std::size_t k = 0; k < smp.size(); ++k) {
                const double d = (smp[k].x - x).squaredNorm();
                if (d < db) {
                    db = d;
                    ib = k;
                }
            }
            // Golden-section refinement around the best sample.
            double a = smp[ib > 0 ? ib - 1 : 0].t;
            double b = smp[std::min(ib + 1, smp.size() - 1)].t;
            const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
            double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
            double f1 = (c.eval(c1) - x).squaredNorm(), f2 = (c.eval(c2) - x).squaredNorm();
            for (int it = 0; it < 60; ++it) {
                if (f1 < f2) {
                    b = c2;
                    c2 = c1;
                    f2 = f1;
                    c1 = b - gr * (b - a);
                    f1 = (c.eval(c1) - x).squaredNorm();
                } else {
                    a = c1;
                    c1 = c2;
                    f1 = f2;
                    c2 = a + gr * (b - a);
                    f2 = (c.eval(c2) - x).squaredNorm();
                }
            }
            best = std::min(best, std::min(db, std::min(f1, f2)));
        }
    }
    return std::sqrt(best);
}

bool BoundaryModel::ray_parity(const Vector2d& x, const Vector2d& dir, bool& ok) const {
    ok = true;
    int crossings = 0;
    const double diam = diameter();
    for (std::size_t ci = 0; ci < chains_.size() && ok; ++ci) {
        for (std::size_t si = 0; si < chains_[ci].segments.size() && ok; ++si) {
            const NurbsCurve2D& c = chains_[ci].segments[si].curve;
            const auto bp = c.breakpoints();
            for (std::size_t b = 0; b + 1 < bp.size() && ok; ++b) {
                auto g = [&](double t) { return cross2(c.eval(t) - x, dir); };
                std::vector<double> roots;
                scalar_roots(g, bp[b], bp[b + 1], 24, roots);
                // A near-tangent graze without a sign change is ambiguous.
                double gmax = 0;
                for (int q = 0; q <= 24; ++q)
                    gmax = std::max(gmax, std::abs(g(bp[b] + (bp[b + 1] - bp[b]) * q / 24.0)));
                if (gmax < 1e-9 * diam) {
                    ok = false;
                    break;
                }
                for (double t : roots) {
                    const double span = bp[b + 1] - bp[b];
                    // Junction (possible corner) hits invalidate the ray.
                    if ((b == 0 && t - bp.front() < 1e-9 * span) ||
                        (b + 2 == bp.size() && bp.back() - t < 1e-9 * span)) {
                        ok = false;
                        break;
                    }
                    const double s = (c.eval(t) - x).dot(dir);
                    if (std::abs(s) < 1e-13 * diam) {
                        ok = false;  // ray origin effectively on the boundary
                        break;
                    }
                    // Transversality check.
                    const double dg = std::abs(g(std::min(t + 1e-7 * span, bp[b + 1])) - g(std::max(t - 1e-7 * span, bp[b]))) /
                                      (2e-7 * span);
                    if (dg * span < 1e-7 * diam) {
                        ok = false;
                        break;
                    }
                    if (s > 0) ++crossings;
                }
            }
        }
    }
    return (crossings % 2) == 1;
}

PointClass BoundaryModel::classify(const Vector2d& x, double tol) const {
    if (tol <= 0) tol = 1e-12 * diameter();
    if (distance(x) < tol) return PointClass::OnBoundary;
    const double golden = 0.6180339887498949;
    for (int attempt = 0; attempt < 32; ++attempt) {
        const double th = 0.1234567 + 2.0 * M_PI * golden * attempt;
        bool ok = false;
        const bool in = ray_parity(x, Vector2d(std::cos(th), std::sin(th)), ok);
        if (ok) return in ? PointClass::Inside : PointClass::Outside;
    }
    throw std::runtime_error("BoundaryModel::classify: no valid ray direction found");
}

std::vector<CurvePiece> BoundaryModel::pieces_in_box(const Vector2d& lo, const Vector2d& hi) const {
    std::vector<CurvePiece> out;
    const double ptol = 1e-11;
    for (int ci = 0; ci < num_chains(); ++ci) {
        const auto& segs = chains_[static_cast<size_t>(ci)].segments;
        for (int si = 0; si < static_cast<int>(segs.size()); ++si) {
            const NurbsCurve2D& c = segs[static_cast<size_t>(si)].curve;
            // Control-polygon bounding box rejects most segments outright.
            Vector2d clo(1e300, 1e300), chi(-1e300, -1e300);
            for (const Vector2d& p : c.control()) {
                clo = clo.cwiseMin(p);
                chi = chi.cwiseMax(p);
            }
            if (clo.x() > hi.x() || chi.x() < lo.x() || clo.y() > hi.y() || chi.y() < lo.y()) continue;

            std::vector<double> cuts = c.breakpoints();
            const auto bp = c.breakpoints();
            for (std::size_t b = 0; b + 1 < bp.size(); ++b) {
                for (int axis = 0; axis < 2; ++axis) {
                    for (double line : {axis == 0 ? lo.x() : lo.y(), axis == 0 ? hi.x() : hi.y()}) {
                        auto g = [&](double t) { return c.eval(t)[axis] - line; };
                        scalar_roots(g, bp[b], bp[b + 1], 24, cuts);
                    }
                }
            }
            std::sort(cuts.begin(), cuts.end());
            const double span = c.t_end() - c.t_begin();
            for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
                if (cuts[k + 1] - cuts[k] < ptol * span) continue;
                const double tm = 0.5 * (cuts[k] + cuts[k + 1]);
                const Vector2d xm = c.eval(tm);
                const double e = 1e-12 * diameter();
                if (xm.x() > lo.x() + e && xm.x() < hi.x() - e && xm.y() > lo.y() + e && xm.y() < hi.y() - e)
                    out.push_back({ci, si, cuts[k], cuts[k + 1]});
            }
        }
    }
    return out;
}

double BoundaryModel::perimeter() const {
    std::vector<double> pts, wts;
    util::gauss_legendre_01(16, pts, wts);
    double len = 0;
    for (const BoundaryChain& ch : chains_) {
        for (const BoundarySegment& s : ch.segments) {
            const auto bp = s.curve.breakpoints();
            for (std::size_t b = 0; b + 1 < bp.size(); ++b)
                for (std::size_t q = 0; q < pts.size(); ++q)
                    len += s.curve.eval(bp[b] + (bp[b + 1] - bp[b]) * pts[q], 1).norm() * wts[q] * (bp[b + 1] - bp[b]);
        }
    }
    return len;
}

}  // namespace flexo::geom
