#include "flexo/geom/nurbs_curve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flexo::geom {

int find_span(int degree, const std::vector<double>& knots, std::size_t n_ctrl, double t) {
    const int lo = degree;
    const int hi = static_cast<int>(n_ctrl);  // domain is [knots[lo], knots[hi]]
    if (t >= knots[static_cast<size_t>(hi)]) return hi - 1;
    if (t <= knots[static_cast<size_t>(lo)]) return lo;
    auto it = std::upper_bound(knots.begin() + lo, knots.begin() + hi, t);
    return static_cast<int>(it - knots.begin()) - 1;
}

void bspline_basis_ders(int degree, const std::vector<double>& knots, int span, double t,
                        int nders, double out[3][16]) {
    // Standard triangular-table algorithm with knot differences.
    double ndu[16][16], left[16], right[16], a[2][16];
    ndu[0][0] = 1.0;
    for (int j = 1; j <= degree; ++j) {
        left[j] = t - knots[static_cast<size_t>(span + 1 - j)];
        right[j] = knots[static_cast<size_t>(span + j)] - t;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu[j][r] = right[r + 1] + left[j - r];
            const double temp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu[j][j] = saved;
    }
    for (int j = 0; j <= degree; ++j) out[0][j] = ndu[j][degree];
    for (int r = 0; r <= degree; ++r) {
        int s1 = 0, s2 = 1;
        a[0][0] = 1.0;
        for (int k = 1; k <= nders; ++k) {
            double d = 0.0;
            const int rk = r - k, pk = degree - k;
            if (r >= k) {
                a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
                d = a[s2][0] * ndu[rk][pk];
            }
            const int j1 = (rk >= -1) ? 1 : -rk;
            const int j2 = (r - 1 <= pk) ? k - 1 : degree - r;
            for (int j = j1; j <= j2; ++j) {
                a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
                d += a[s2][j] * ndu[rk + j][pk];
            }
            if (r <= pk) {
                a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                d += a[s2][k] * ndu[r][pk];
            }
            out[k][r] = d;
            std::swap(s1, s2);
        }
    }
    double factor = degree;
    for (int k = 1; k <= nders; ++k) {
        for (int j = 0; j <= degree; ++j) out[k][j] *= factor;
        factor *= degree - k;
    }
}

NurbsCurve2D::NurbsCurve2D(int degree, std::vector<double> knots, std::vector<Vector2d> control,
                           std::vector<double> weights)
    : degree_(degree), knots_(std::move(knots)), control_(std::move(control)), weights_(std::move(weights)) {
    if (degree_ < 1 || degree_ > 12) throw std::invalid_argument("NurbsCurve2D: bad degree");
    if (control_.size() != weights_.size() || control_.empty())
        throw std::invalid_argument("NurbsCurve2D: control/weight count mismatch");
    if (knots_.size() != control_.size() + static_cast<size_t>(degree_) + 1)
        throw std::invalid_argument("NurbsCurve2D: bad knot count");
    for (double w : weights_)
        if (w <= 0) throw std::invalid_argument("NurbsCurve2D: weights must be positive");
    if (!std::is_sorted(knots_.begin(), knots_.end())) throw std::invalid_argument("NurbsCurve2D: knots not sorted");
}

NurbsCurve2D NurbsCurve2D::line(const Vector2d& a, const Vector2d& b) {
    return NurbsCurve2D(1, {0, 0, 1, 1}, {a, b}, {1.0, 1.0});
}

NurbsCurve2D NurbsCurve2D::arc(const Vector2d& center, double radius, double a0, double a1) {
    const double sweep = a1 - a0;
    if (sweep <= 0 || sweep >= M_PI) throw std::invalid_argument("NurbsCurve2D::arc: sweep must be in (0, pi)");
    const double half = 0.5 * sweep;
    const double w = std::cos(half);
    const Vector2d p0 = center + radius * Vector2d(std::cos(a0), std::sin(a0));
    const Vector2d p2 = center + radius * Vector2d(std::cos(a1), std::sin(a1));
    const double am = 0.5 * (a0 + a1);
    const Vector2d pm = center + (radius / w) * Vector2d(std::cos(am), std::sin(am));
    return NurbsCurve2D(2, {0, 0, 0, 1, 1, 1}, {p0, pm, p2}, {1.0, w, 1.0});
}

Vector2d NurbsCurve2D::eval(double t, int d) const {
    if (d < 0 || d > 2) throw std::invalid_argument("NurbsCurve2D::eval: derivative order must be 0..2");
    if (t < t_begin() - 1e-12 || t > t_end() + 1e-12) throw std::invalid_argument("NurbsCurve2D::eval: t out of range");
    t = std::clamp(t, t_begin(), t_end());
    const int span = find_span(degree_, knots_, control_.size(), t);
    double nd[3][16];
    bspline_basis_ders(degree_, knots_, span, t, 2, nd);

    // Homogeneous curve A(t) = sum N_i w_i P_i, W(t) = sum N_i w_i.
    Vector2d A[3] = {Vector2d::Zero(), Vector2d::Zero(), Vector2d::Zero()};
    double W[3] = {0, 0, 0};
    for (int j = 0; j <= degree_; ++j) {
        const std::size_t idx = static_cast<size_t>(span - degree_ + j);
        for (int k = 0; k <= 2; ++k) {
            A[k] += nd[k][j] * weights_[idx] * control_[idx];
            W[k] += nd[k][j] * weights_[idx];
        }
    }
    const Vector2d C = A[0] / W[0];
    if (d == 0) return C;
    const Vector2d C1 = (A[1] - W[1] * C) / W[0];
    if (d == 1) return C1;
    return (A[2] - 2.0 * W[1] * C1 - W[2] * C) / W[0];
}

NurbsCurve2D NurbsCurve2D::reversed() const {
    std::vector<Vector2d> rc(control_.rbegin(), control_.rend());
    std::vector<double> rw(weights_.rbegin(), weights_.rend());
    const double a = knots_.front(), b = knots_.back();
    std::vector<double> rk(knots_.size());
    for (std::size_t i = 0; i < knots_.size(); ++i) rk[i] = a + b - knots_[knots_.size() - 1 - i];
    return NurbsCurve2D(degree_, std::move(rk), std::move(rc), std::move(rw));
}

std::vector<double> NurbsCurve2D::breakpoints() const {
    std::vector<double> bp;
    bp.push_back(t_begin());
    for (std::size_t i = static_cast<size_t>(degree_) + 1; i < control_.size(); ++i) {
        if (knots_[i] > bp.back() + 1e-14 && knots_[i] < t_end() - 1e-14) bp.push_back(knots_[i]);
    }
    bp.push_back(t_end());
    return bp;
}

}  // namespace flexo::geom
