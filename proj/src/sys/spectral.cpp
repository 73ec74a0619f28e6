#include "flexo/sys/spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <cmath>
#include <functional>
#include <vector>

namespace flexo::sys {

namespace {

// Deterministic pseudo-random start vector.
Eigen::VectorXd start_vector(int n) {
    Eigen::VectorXd v(n);
    std::uint64_t s = 0x9e3779b97f4a7c15ull;
    for (int i = 0; i < n; ++i) {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        v(i) = static_cast<double>((s >> 11) & 0xfffffu) / double(0xfffff) - 0.5;
    }
    v.normalize();
    return v;
}

// Lanczos with full reorthogonalization on an abstract operator.
void lanczos_extremes(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& op, int n,
                      int m, double& lmin, double& lmax, bool& converged) {
    m = std::min(m, n);
    std::vector<Eigen::VectorXd> V;
    std::vector<double> alpha, beta;
    Eigen::VectorXd v = start_vector(n);
    Eigen::VectorXd w;
    converged = false;
    double prev_min = 0, prev_max = 0;
    for (int k = 0; k < m; ++k) {
        V.push_back(v);
        w = op(v);
        const double a = v.dot(w);
        alpha.push_back(a);
        w -= a * v;
        if (k > 0) w -= beta.back() * V[static_cast<size_t>(k - 1)];
        for (const auto& q : V) w -= q.dot(w) * q;  // full reorthogonalization
        const double bnorm = w.norm();

        if ((k + 1) % 10 == 0 || bnorm < 1e-14 || k + 1 == m) {
            const int kk = static_cast<int>(alpha.size());
            Eigen::MatrixXd T = Eigen::MatrixXd::Zero(kk, kk);
            for (int i = 0; i < kk; ++i) {
                T(i, i) = alpha[static_cast<size_t>(i)];
                if (i + 1 < kk) T(i, i + 1) = T(i + 1, i) = beta[static_cast<size_t>(i)];
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
            lmin = es.eigenvalues().minCoeff();
            lmax = es.eigenvalues().maxCoeff();
            const double scale = std::max(std::abs(lmin), std::abs(lmax));
            if (k > 20 && std::abs(lmin - prev_min) < 1e-10 * scale &&
                std::abs(lmax - prev_max) < 1e-10 * scale) {
                converged = true;
                return;
            }
            prev_min = lmin;
            prev_max = lmax;
            if (bnorm < 1e-14) {
                converged = true;
                return;
            }
        }
        beta.push_back(bnorm);
        v = w / bnorm;
    }
}

}  // namespace

Extremes symmetric_extremes(const Eigen::SparseMatrix<double>& A, int max_krylov, double tol) {
    Extremes ex;
    const int n = static_cast<int>(A.rows());
    if (n == 0) return ex;
    if (n <= 600) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(A), Eigen::EigenvaluesOnly);
        ex.lmin = es.eigenvalues().minCoeff();
        ex.lmax = es.eigenvalues().maxCoeff();
        ex.converged = true;
        return ex;
    }

    auto apply = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return A * v; };
    bool conv = false;
    lanczos_extremes(apply, n, max_krylov, ex.lmin, ex.lmax, conv);
    ex.converged = conv;
    ex.iterations = max_krylov;

    // Shift-invert refinement around zero resolves the eigenvalue closest to
    // the origin, whose sign decides stability when Lanczos leaves it
    // buried in the spectrum.
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    Eigen::SparseMatrix<double> Ac = A;
    Ac.makeCompressed();
    lu.compute(Ac);
    if (lu.info() == Eigen::Success) {
        auto apply_inv = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return lu.solve(v); };
        double numin = 0, numax = 0;
        bool c2 = false;
        lanczos_extremes(apply_inv, n, std::min(max_krylov, 120), numin, numax, c2);
        // Every converged Ritz value nu of A^-1 certifies the eigenvalue
        // 1/nu of A; widen the bracket accordingly.
        if (numin < 0) {
            ex.lmin = std::min(ex.lmin, 1.0 / numin);
            ex.lmax = std::max(ex.lmax, 1.0 / numin);
        }
        if (numax > 0) {
            ex.lmin = std::min(ex.lmin, 1.0 / numax);
            ex.lmax = std::max(ex.lmax, 1.0 / numax);
        }
        ex.converged = ex.converged && c2;
    }
    (void)tol;
    return ex;
}

}  // namespace flexo::sys
