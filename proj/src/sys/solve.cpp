#include "flexo/sys/solve.hpp"

#include <Eigen/SparseLU>
#include <cmath>

namespace flexo::sys {

SolveReport solve_system(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b,
                         bool want_condition) {
    SolveReport rep;
    const int n = static_cast<int>(A.rows());
    if (n == 0) {
        rep.ok = true;
        return rep;
    }

    // Symmetric Jacobi equilibration: physical units put the electrical
    // diagonal many orders below the mechanical one, and balancing on the
    // diagonal (rather than row maxima) keeps the potential pivots from
    // drowning under the coupling scale. Zero-diagonal rows (electrode
    // scalars) fall back to their row maximum.
    Eigen::VectorXd rowmax = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < A.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it) {
            rowmax(it.row()) = std::max(rowmax(it.row()), std::abs(it.value()));
            if (it.row() == it.col()) diag(it.row()) = std::abs(it.value());
        }
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) {
        const double base = diag(i) > 1e-300 ? diag(i) : rowmax(i);
        d(i) = base > 0 ? 1.0 / std::sqrt(base) : 1.0;
    }

    Eigen::SparseMatrix<double> As = d.asDiagonal() * A * d.asDiagonal();
    As.makeCompressed();

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(As);
    if (lu.info() != Eigen::Success) {
        rep.error = "sparse LU factorization failed: " + lu.lastErrorMessage();
        return rep;
    }

    auto apply_inverse = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
        return d.asDiagonal() * Eigen::VectorXd(lu.solve(Eigen::VectorXd(d.asDiagonal() * v)));
    };

    // Residuals in extended precision: the saddle system mixes mechanical
    // and electrical row scales across many orders, and the potential is
    // determined under heavy cancellation against the coupling terms.
    auto residual_ld = [&](const Eigen::VectorXd& x) {
        std::vector<long double> acc(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) acc[static_cast<size_t>(i)] = static_cast<long double>(b(i));
        for (int k = 0; k < A.outerSize(); ++k)
            for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
                acc[static_cast<size_t>(it.row())] -=
                    static_cast<long double>(it.value()) * static_cast<long double>(x(it.col()));
        Eigen::VectorXd r(n);
        for (int i = 0; i < n; ++i) r(i) = static_cast<double>(acc[static_cast<size_t>(i)]);
        return r;
    };

    rep.x = apply_inverse(b);
    double prev = 1e300;
    for (int it = 0; it < 6; ++it) {
        const Eigen::VectorXd r = residual_ld(rep.x);
        const double rn = r.norm();
        if (!(rn < prev * 0.5)) break;
        prev = rn;
        rep.x += apply_inverse(r);
    }
    const double bn = b.norm();
    rep.residual = bn > 0 ? (b - A * rep.x).norm() / bn : (A * rep.x).norm();
    rep.ok = true;

    if (want_condition) {
        // ||A||_1 exactly, ||A^-1||_1 by Hager's estimator (A is symmetric,
        // so transpose solves coincide with plain ones).
        double anorm = 0;
        for (int k = 0; k < A.outerSize(); ++k) {
            double colsum = 0;
            for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it) colsum += std::abs(it.value());
            anorm = std::max(anorm, colsum);
        }
        Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / n);
        double est = 0;
        int last_j = -1;
        for (int iter = 0; iter < 8; ++iter) {
            const Eigen::VectorXd y = apply_inverse(x);
            est = std::max(est, y.lpNorm<1>());
            Eigen::VectorXd xi(n);
            for (int i = 0; i < n; ++i) xi(i) = (y(i) >= 0) ? 1.0 : -1.0;
            const Eigen::VectorXd z = apply_inverse(xi);
            int j = 0;
            z.cwiseAbs().maxCoeff(&j);
            if (std::abs(z(j)) <= z.dot(x) || j == last_j) break;
            x.setZero();
            x(j) = 1.0;
            last_j = j;
        }
        rep.kappa1 = anorm * est;
    }
    return rep;
}

}  // namespace flexo::sys
