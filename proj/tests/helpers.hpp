#pragma once

// Test-only oracles shared between suites: exact L2 projection of smooth
// functions onto the level-0 tensor B-spline space over the embedding box.
// For functions that lie in the space (polynomials up to the degree) the
// projection recovers exact coefficients, independent of any solver path.

#include <Eigen/Dense>
#include <functional>

#include "flexo/spline/hierarchical_basis.hpp"
#include "flexo/util/gauss.hpp"

namespace flexo_test {

inline Eigen::MatrixXd axis_gram(const flexo::spline::LevelBasis2D& L0, bool xaxis) {
    const int p = L0.degree;
    const int nc = xaxis ? L0.ncx : L0.ncy;
    const double x0 = xaxis ? L0.x0 : L0.y0;
    const int n = nc + p;
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
    std::vector<double> pts, wts;
    flexo::util::gauss_legendre_01(p + 1, pts, wts);
    for (int c = 0; c < nc; ++c) {
        for (std::size_t q = 0; q < pts.size(); ++q) {
            const double x = x0 + (c + pts[q]) * L0.cell;
            const double xi = (x - x0) / L0.cell + L0.offset;
            for (int a = 0; a <= p; ++a)
                for (int b = 0; b <= p; ++b) {
                    const int ia = c + a, ib = c + b;  // window-relative indices
                    const double va = flexo::spline::eval_translated(p, xi - (L0.offset - p + ia), 0);
                    const double vb = flexo::spline::eval_translated(p, xi - (L0.offset - p + ib), 0);
                    G(ia, ib) += va * vb * wts[q] * L0.cell;
                }
        }
    }
    return G;
}

/// Level-0 coefficients of f by tensor-product L2 projection over the box.
/// Index access: coeffs(i - first_index, j - first_index).
inline Eigen::MatrixXd tensor_l2_coeffs(const flexo::spline::HierarchicalBasis& basis,
                                        const std::function<double(double, double)>& f) {
    const auto& L0 = basis.level(0);
    const int p = L0.degree;
    const int nx = L0.ncx + p, ny = L0.ncy + p;
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(nx, ny);
    std::vector<double> pts, wts;
    flexo::util::gauss_legendre_01(p + 2, pts, wts);
    for (int cx = 0; cx < L0.ncx; ++cx)
        for (int cy = 0; cy < L0.ncy; ++cy)
            for (std::size_t qx = 0; qx < pts.size(); ++qx)
                for (std::size_t qy = 0; qy < pts.size(); ++qy) {
                    const double x = L0.x0 + (cx + pts[qx]) * L0.cell;
                    const double y = L0.y0 + (cy + pts[qy]) * L0.cell;
                    const double w = wts[qx] * wts[qy] * L0.cell * L0.cell;
                    const double fx = f(x, y);
                    const double xix = (x - L0.x0) / L0.cell + L0.offset;
                    const double xiy = (y - L0.y0) / L0.cell + L0.offset;
                    for (int a = 0; a <= p; ++a)
                        for (int b = 0; b <= p; ++b) {
                            const int ia = cx + a, ib = cy + b;
                            const double va =
                                flexo::spline::eval_translated(p, xix - (L0.offset - p + ia), 0);
                            const double vb =
                                flexo::spline::eval_translated(p, xiy - (L0.offset - p + ib), 0);
                            F(ia, ib) += fx * va * vb * w;
                        }
                }
    const Eigen::MatrixXd Gx = axis_gram(L0, true);
    const Eigen::MatrixXd Gy = axis_gram(L0, false);
    Eigen::MatrixXd C = Gx.ldlt().solve(F);
    C = Gy.ldlt().solve(C.transpose()).transpose();
    return C;
}

}  // namespace flexo_test
