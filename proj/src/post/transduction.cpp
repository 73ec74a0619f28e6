#include "flexo/post/transduction.hpp"

#include <cmath>
#include <stdexcept>

namespace flexo::post {

EnergySplit coupling_factor(const SolutionField& sol, const mat::MaterialSet& material,
                            const mesh::QuadratureScheme& quad) {
    EnergySplit es;
    for (const mesh::CellQuadrature& cq : quad.cells) {
        for (const mesh::BulkPoint& q : cq.bulk) {
            const forms::StateDerivatives st = sol.eval(q.x, 1, false);
            const Eigen::Matrix2d eps = st.eps();
            const Eigen::Vector2d E = st.E();
            es.dielectric += 0.5 * q.w * E.dot(material.kappa * E);
            double me = 0;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    for (int k = 0; k < 2; ++k)
                        for (int l = 0; l < 2; ++l) me += eps(i, j) * material.C(i, j, k, l) * eps(k, l);
            es.mechanical += 0.5 * q.w * me;
        }
    }
    if (!(es.mechanical > 0)) throw std::runtime_error("coupling_factor: zero mechanical energy, k_eff undefined");
    es.k_eff = std::sqrt(es.dielectric / es.mechanical);
    return es;
}

double eprime_flexo_estimate(double a_prime) { return std::sqrt(12.0) / a_prime; }
double eprime_flexopiezo_estimate(double a_prime) { return std::sqrt(1.0 + 12.0 / (a_prime * a_prime)); }

}  // namespace flexo::post
