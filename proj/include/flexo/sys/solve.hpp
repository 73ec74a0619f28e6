#pragma once

#include <Eigen/Sparse>
#include <string>

namespace flexo::sys {

struct SolveReport {
    Eigen::VectorXd x;
    double residual = 0;  // ||Ax - b|| / ||b||
    double kappa1 = 0;    // 1-norm condition estimate of A (0 when skipped)
    bool ok = false;
    std::string error;
};

/// Direct sparse LU with symmetric max-norm equilibration and two rounds of
/// iterative refinement. The condition number is Hager's 1-norm estimate on
/// the unscaled matrix, using solves through the factorization.
SolveReport solve_system(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b,
                         bool want_condition = false);

}  // namespace flexo::sys
