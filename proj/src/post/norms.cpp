#include "flexo/post/norms.hpp"

#include <cmath>

namespace flexo::post {

ErrorNorms error_norms(const SolutionField& sol, const ReferenceSolution& ref,
                       const mesh::QuadratureScheme& quad) {
    ErrorNorms out;
    double e0 = 0, e1 = 0, e2 = 0, e3 = 0;
    double r0 = 0, r1 = 0, r2 = 0, r3 = 0;
    for (const mesh::CellQuadrature& cq : quad.cells) {
        for (const mesh::BulkPoint& q : cq.bulk) {
            const forms::StateDerivatives st = sol.eval(q.x, 3, false);

            const double su[3] = {st.u(0), st.u(1), st.phi};
            const double ru[3] = {ref.u(0, 0, 0, q.x), ref.u(1, 0, 0, q.x), ref.phi(0, 0, q.x)};
            for (int c = 0; c < 3; ++c) {
                e0 += q.w * (su[c] - ru[c]) * (su[c] - ru[c]);
                r0 += q.w * ru[c] * ru[c];
            }

            for (int c = 0; c < 3; ++c)
                for (int i = 0; i < 2; ++i) {
                    const double sv = c < 2 ? st.grad_u(c, i) : st.grad_phi(i);
                    const int dx = (i == 0), dy = 1 - dx;
                    const double rv = c < 2 ? ref.u(c, dx, dy, q.x) : ref.phi(dx, dy, q.x);
                    e1 += q.w * (sv - rv) * (sv - rv);
                    r1 += q.w * rv * rv;
                }

            for (int c = 0; c < 3; ++c)
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j) {
                        const double sv = c < 2 ? st.grad2_u(c, i, j) : st.grad2_phi(i, j);
                        const int dx = (i == 0) + (j == 0), dy = 2 - dx;
                        const double rv = c < 2 ? ref.u(c, dx, dy, q.x) : ref.phi(dx, dy, q.x);
                        e2 += q.w * (sv - rv) * (sv - rv);
                        r2 += q.w * rv * rv;
                    }

            for (int c = 0; c < 3; ++c)
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j)
                        for (int k = 0; k < 2; ++k) {
                            const double sv = c < 2 ? st.grad3_u(c, i, j, k) : st.grad3_phi(i, j, k);
                            const int dx = (i == 0) + (j == 0) + (k == 0), dy = 3 - dx;
                            const double rv = c < 2 ? ref.u(c, dx, dy, q.x) : ref.phi(dx, dy, q.x);
                            e3 += q.w * (sv - rv) * (sv - rv);
                            r3 += q.w * rv * rv;
                        }
        }
    }
    out.l2 = std::sqrt(e0);
    out.h1 = std::sqrt(e1);
    out.h2 = std::sqrt(e2);
    out.h3 = std::sqrt(e3);
    out.ref_l2 = std::sqrt(r0);
    out.ref_h1 = std::sqrt(r1);
    out.ref_h2 = std::sqrt(r2);
    out.ref_h3 = std::sqrt(r3);
    return out;
}

}  // namespace flexo::post
