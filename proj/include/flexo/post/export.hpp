#pragma once

#include <Eigen/Sparse>
#include <string>
#include <vector>

#include "flexo/mesh/quadrature.hpp"
#include "flexo/post/solution_field.hpp"

namespace flexo::post {

/// Mapping from the solver's internal (nondimensionalized) coordinates back
/// to physical ones: x_phys = s * x + center. First derivatives (strain,
/// electric field, stress) divide by s.
struct ExportScaling {
    double s = 1.0;
    Eigen::Vector2d center = Eigen::Vector2d::Zero();
};

/// Legacy ASCII VTK unstructured grid over the cut-cell triangulation with
/// point data u, phi, |E|, eps22 and the stress components.
void write_vtk(const std::string& path, const SolutionField& sol, const mesh::CellClassification& cls,
               const mat::MaterialSet& material, const ExportScaling& scaling = {});

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

void write_csv(const std::string& path, const CsvTable& table);

void write_matrix_market(const std::string& path, const Eigen::SparseMatrix<double>& A);

/// Debug dump of quadrature points (kind 0 = bulk, 1 = boundary).
void write_quadrature_csv(const std::string& path, const mesh::QuadratureScheme& quad,
                          const mesh::CellClassification& cls);

}  // namespace flexo::post
