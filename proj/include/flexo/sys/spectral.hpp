#pragma once

#include <Eigen/Sparse>

namespace flexo::sys {

struct Extremes {
    double lmin = 0;
    double lmax = 0;
    bool converged = false;
    int iterations = 0;
};

/// Extreme eigenvalues of a sparse symmetric matrix: Lanczos with full
/// reorthogonalization, refined around zero by a shift-invert pass so the
/// sign of the eigenvalue nearest zero is resolved reliably. Small systems
/// are handled densely.
Extremes symmetric_extremes(const Eigen::SparseMatrix<double>& A, int max_krylov = 300,
                            double tol = 1e-9);

struct SpectralCheck {
    double lambda_min_uu = 0;
    double lambda_max_phiphi = 0;
    bool stable = false;  // lambda_min_uu > 0 and lambda_max_phiphi < 0
};

}  // namespace flexo::sys
