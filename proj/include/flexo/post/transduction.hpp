#pragma once

#include "flexo/mesh/quadrature.hpp"
#include "flexo/post/solution_field.hpp"

namespace flexo::post {

/// Dielectric and mechanical energies of a solved state and the
/// electromechanical coupling factor
///   k_eff = sqrt( int E.kappa.E / int eps:C:eps ).
struct EnergySplit {
    double dielectric = 0;
    double mechanical = 0;
    double k_eff = 0;
};

EnergySplit coupling_factor(const SolutionField& sol, const mat::MaterialSet& material,
                            const mesh::QuadratureScheme& quad);

/// Beam/pyramid transduction measures. e' values come from ratios of k_eff
/// between paired runs; a' = -a e_T / mu_T; E_eff = V / a.
struct TransductionReport {
    double k_eff = 0;
    double a_prime = 0;
    double e_prime_flexo = 0;
    double e_prime_flexopiezo = 0;
    double E_eff = 0;
    std::vector<double> electrode_voltages;
};

/// Analytical estimates for the bending beam:
/// e'_flexo = sqrt(12)/a', e'_flexo-piezo = sqrt(1 + 12/a'^2).
double eprime_flexo_estimate(double a_prime);
double eprime_flexopiezo_estimate(double a_prime);

}  // namespace flexo::post
