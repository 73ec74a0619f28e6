#include "flexo/post/solution_field.hpp"

#include <stdexcept>

#include "flexo/sys/assemble.hpp"

namespace flexo::post {

SolutionField::SolutionField(const mesh::EmbeddingGrid& grid, const sys::DofMap& dofs,
                             Eigen::VectorXd raw_coefficients)
    : grid_(&grid), dofs_(&dofs), raw_(std::move(raw_coefficients)) {
    if (raw_.size() != dofs.n_dofs()) throw std::invalid_argument("SolutionField: coefficient size mismatch");
}

forms::StateDerivatives SolutionField::eval(const Eigen::Vector2d& x, int max_order,
                                            bool check_inside) const {
    const int leaf = grid_->leaf_containing(x);
    if (leaf < 0) throw std::invalid_argument("SolutionField::eval: point outside the embedding box");
    if (check_inside) {
        const auto pc = grid_->boundary().classify(x);
        if (pc == geom::PointClass::Outside)
            throw std::invalid_argument("SolutionField::eval: point outside the physical domain");
    }
    const mesh::LeafCell& cell = grid_->leaves()[static_cast<size_t>(leaf)];
    const auto fns = grid_->basis().functions_on_cell(cell.level, cell.cx, cell.cy);

    const int max_slot = max_order >= 3 ? 9 : (max_order == 2 ? 5 : (max_order == 1 ? 2 : 0));
    std::vector<double> scratch[10];
    forms::PointBasis pb;
    sys::eval_point_basis(grid_->basis(), fns, x, max_slot, scratch, pb);

    forms::StateDerivatives st;
    const int R = dofs_->n_retained();
    for (std::size_t f = 0; f < fns.size(); ++f) {
        const int r = dofs_->retained_of(fns[f]);
        if (r < 0) continue;
        const double a[3] = {raw_(2 * r), raw_(2 * r + 1), raw_(2 * R + r)};
        const double v = pb.d[0][f];
        st.u(0) += a[0] * v;
        st.u(1) += a[1] * v;
        st.phi += a[2] * v;
        if (max_order < 1) continue;
        for (int d = 0; d < 2; ++d) {
            const double g = pb.d[1 + d][f];
            st.grad_u(0, d) += a[0] * g;
            st.grad_u(1, d) += a[1] * g;
            st.grad_phi(d) += a[2] * g;
        }
        if (max_order < 2) continue;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                const double g = pb.d[3 + i + j][f];
                st.grad2_u(0, i, j) += a[0] * g;
                st.grad2_u(1, i, j) += a[1] * g;
                st.grad2_phi(i, j) += a[2] * g;
            }
        if (max_order < 3) continue;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) {
                    const double g = pb.d[6 + i + j + k][f];
                    st.grad3_u(0, i, j, k) += a[0] * g;
                    st.grad3_u(1, i, j, k) += a[1] * g;
                    st.grad3_phi(i, j, k) += a[2] * g;
                }
    }
    return st;
}

}  // namespace flexo::post
