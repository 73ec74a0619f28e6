#pragma once

#include <Eigen/Dense>

#include "flexo/mat/materials.hpp"

namespace flexo::forms {

using Eigen::Matrix2d;
using Eigen::Vector2d;
using mat::Tensor3;
using mat::Tensor4;

/// Pointwise state of the fields with the derivatives the formulation
/// consumes: u through third (bulk) or fourth (manufactured sources)
/// gradients, phi through third. Index conventions:
///   grad_u(i,j)        = u_i,j
///   grad2_u(i,j,k)     = u_i,jk
///   grad3_u(i,j,k,l)   = u_i,jkl
struct StateDerivatives {
    Vector2d u = Vector2d::Zero();
    Matrix2d grad_u = Matrix2d::Zero();
    Tensor3 grad2_u;
    Tensor4 grad3_u;
    double phi = 0;
    Vector2d grad_phi = Vector2d::Zero();
    Matrix2d grad2_phi = Matrix2d::Zero();
    Tensor3 grad3_phi;  // phi_,ijk; only error measures consume it

    Matrix2d eps() const {
        return 0.5 * (grad_u + grad_u.transpose());
    }
    /// eps_ij,k
    Tensor3 grad_eps() const {
        Tensor3 g;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) g(i, j, k) = 0.5 * (grad2_u(i, j, k) + grad2_u(j, i, k));
        return g;
    }
    /// eps_ij,kl
    Tensor4 grad2_eps() const {
        Tensor4 g;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l) g(i, j, k, l) = 0.5 * (grad3_u(i, j, k, l) + grad3_u(j, i, k, l));
        return g;
    }
    Vector2d E() const { return -grad_phi; }
    /// E_l,q
    Matrix2d grad_E() const { return -grad2_phi; }
};

}  // namespace flexo::forms
