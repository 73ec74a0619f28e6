#include "flexo/spline/uniform_basis.hpp"

#include <cmath>
#include <stdexcept>

namespace flexo::spline {

namespace {

// Triangular Cox-de Boor table on one unit span of the uniform integer knot
// vector. Row k holds the k+1 functions of degree k that are nonzero there;
// column j corresponds to function index span - k + j. Derivatives follow
// the knot-difference recursion dB_i^k = B_i^{k-1} - B_{i+1}^{k-1}, which for
// unit knot spacing has no extra factor.
void fill_table(int p, double tau, double out[8][kMaxDeriv + 1]) {
    double tab[8][8][kMaxDeriv + 1] = {};  // [degree][j][deriv]
    tab[0][0][0] = 1.0;
    for (int k = 1; k <= p; ++k) {
        for (int j = 0; j <= k; ++j) {
            const double lo = (j > 0) ? tab[k - 1][j - 1][0] : 0.0;
            const double hi = (j < k) ? tab[k - 1][j][0] : 0.0;
            const double w1 = (tau + static_cast<double>(k - j)) / k;
            const double w2 = (static_cast<double>(j + 1) - tau) / k;
            tab[k][j][0] = w1 * lo + w2 * hi;
            for (int d = 1; d <= kMaxDeriv && d <= k; ++d) {
                const double lod = (j > 0) ? tab[k - 1][j - 1][d - 1] : 0.0;
                const double hid = (j < k) ? tab[k - 1][j][d - 1] : 0.0;
                tab[k][j][d] = lod - hid;
            }
        }
    }
    for (int j = 0; j <= p; ++j)
        for (int d = 0; d <= kMaxDeriv; ++d) out[j][d] = tab[p][j][d];
}

}  // namespace

SpanValues eval_span(int degree, double tau) {
    if (degree < 1 || degree > 7) throw std::invalid_argument("eval_span: degree out of range");
    if (tau < -1e-12 || tau > 1.0 + 1e-12) throw std::invalid_argument("eval_span: tau outside [0,1]");
    SpanValues sv;
    sv.degree = degree;
    double out[8][kMaxDeriv + 1];
    fill_table(degree, tau, out);
    for (int j = 0; j <= degree; ++j)
        for (int d = 0; d <= kMaxDeriv; ++d) sv.v[static_cast<size_t>(j)][static_cast<size_t>(d)] = out[j][d];
    return sv;
}

double eval_translated(int degree, double x, int d) {
    if (d < 0 || d > kMaxDeriv) throw std::invalid_argument("B-spline derivative order must be in [0,3]");
    if (x <= 0.0 || x >= degree + 1.0) return 0.0;
    const int span = static_cast<int>(std::floor(x));
    const double tau = x - span;
    double out[8][kMaxDeriv + 1];
    fill_table(degree, tau, out);
    // On span [span, span+1] the nonzero functions are span-p+j, j=0..p;
    // function 0 corresponds to j = p - span.
    const int j = degree - span;
    if (j < 0 || j > degree) return 0.0;
    return out[j][d];
}

void eval_translated_all(int degree, double x, double out[kMaxDeriv + 1]) {
    for (int d = 0; d <= kMaxDeriv; ++d) out[d] = 0.0;
    if (x <= 0.0 || x >= degree + 1.0) return;
    const int span = static_cast<int>(std::floor(x));
    const int j = degree - span;
    if (j < 0 || j > degree) return;
    double tab[8][kMaxDeriv + 1];
    fill_table(degree, x - span, tab);
    for (int d = 0; d <= kMaxDeriv; ++d) out[d] = tab[j][d];
}

UniformBasis1D::UniformBasis1D(int degree, int count) : p_(degree), n_(count) {
    if (degree < 1) throw std::invalid_argument("UniformBasis1D: degree must be >= 1");
    if (count < 1) throw std::invalid_argument("UniformBasis1D: count must be >= 1");
}

double UniformBasis1D::eval(int i, double xi, int d) const {
    if (i < 0 || i >= n_) throw std::invalid_argument("UniformBasis1D::eval: index out of range");
    if (d < 0 || d > kMaxDeriv) throw std::invalid_argument("UniformBasis1D::eval: derivative order must be in [0,3]");
    return eval_translated(p_, xi - i, d);
}

std::vector<double> two_scale_coeffs(int degree) {
    if (degree < 1) throw std::invalid_argument("two_scale_coeffs: degree must be >= 1");
    std::vector<double> s(static_cast<size_t>(degree) + 2);
    // s_j = 2^{-p} binom(p+1, j)
    double binom = 1.0;
    const double scale = std::pow(2.0, -degree);
    for (int j = 0; j <= degree + 1; ++j) {
        s[static_cast<size_t>(j)] = scale * binom;
        binom = binom * (degree + 1 - j) / (j + 1);
    }
    return s;
}

}  // namespace flexo::spline
