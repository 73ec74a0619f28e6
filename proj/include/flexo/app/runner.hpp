#pragma once

#include <array>
#include <memory>
#include <string>

#include "flexo/app/cases.hpp"
#include "flexo/app/config.hpp"
#include "flexo/geom/boundary_model.hpp"
#include "flexo/post/export.hpp"
#include "flexo/post/norms.hpp"
#include "flexo/post/solution_field.hpp"
#include "flexo/sys/penalty.hpp"
#include "flexo/sys/solve.hpp"
#include "flexo/sys/spectral.hpp"

namespace flexo::app {

/// One immersed solve, from geometry to an assembled system. Cases and
/// tests drive it directly; the CLI wraps it.
struct PipelineSetup {
    std::shared_ptr<geom::BoundaryModel> boundary;
    double x0 = 0, y0 = 0, h = 1;
    int nx = 1, ny = 1;
    int degree = 3;
    int max_levels = 1;
    std::vector<std::array<double, 4>> refine_boxes;  // xa, ya, xb, yb
    int refine_levels = 0;                            // extra levels inside the boxes
    mat::MaterialParams material;
    std::function<forms::BCRegionSpec(const geom::BoundaryModel&)> make_bcs;
    sys::LoadFns loads;
    std::string penalty_mode = "zeta";  // zeta | explicit | auto
    double zeta = 100;
    forms::PenaltySet beta_explicit;
    double auto_margin = 1.1;
    std::string stab_mode = "auto";  // auto | extended | diagonal | none
    int bulk_q = 0;                  // 0 -> degree + 1
    int boundary_q = 0;              // 0 -> degree + 1
    std::shared_ptr<post::ReferenceSolution> reference;
    int threads = 1;
};

struct Pipeline {
    PipelineSetup setup;
    std::shared_ptr<geom::BoundaryModel> boundary;
    spline::HierarchicalBasis basis;
    std::unique_ptr<mesh::EmbeddingGrid> grid;
    mesh::CellClassification cls;
    mesh::QuadratureScheme quad;
    std::unique_ptr<sys::DofMap> dofs;
    sys::StabilizationMap stab;
    forms::BCRegionSpec bcs;
    sys::AssembledSystem system;
    std::vector<sys::PenaltyBounds> cell_bounds;  // auto mode only

    sys::SolveReport report;
    std::unique_ptr<post::SolutionField> field;

    static std::shared_ptr<Pipeline> build(const PipelineSetup& s);

    /// Penalty set per cell for the current mode (zeta value overridable).
    forms::PenaltySet penalties_for(std::size_t ci, const mesh::CellInfo& info, double zeta) const;

    /// Re-assemble with a different zeta (same mesh, stabilization, data).
    sys::AssembledSystem assemble_with_zeta(double zeta) const;

    /// Factor + solve; fills report and field.
    bool solve(bool want_condition = false);

    post::ErrorNorms errors() const;  // requires setup.reference and field
    sys::SpectralCheck spectral() const;
};

/// Builtin benchmark setups (solver coordinates; see the README for the
/// physical parameters they encode).
PipelineSetup corner_study_setup(double b_over_b0, bool corners_on, double zeta = 100, int cells = 32,
                                 int degree = 3);
PipelineSetup sensitivity_setup(double chi_min_target, double zeta = 100, int cells = 32, int degree = 3);
enum class BeamCoupling { Piezo, Flexo, FlexoPiezo };
PipelineSetup beam_setup(double a_prime, BeamCoupling coupling, double zeta = 100, int cells_across = 8,
                         int degree = 3);
PipelineSetup convergence_setup(int cells, int degree, double zeta = 100);
PipelineSetup pyramid_setup(double a_um, double zeta = 100, int cells_across_height = 42, int degree = 3);

struct CaseResult {
    int exit_code = 0;  // 0 ok, 2 validation error, 3 solver error
    std::vector<std::string> lines;
};

CaseResult run_solve(const RunConfig& cfg, const std::string& out_dir, int threads);
CaseResult run_converge(const RunConfig& cfg, const std::string& out_dir, int threads);
CaseResult run_sweep(RunConfig cfg, const std::string& param, const std::vector<double>& values,
                     const std::string& out_dir, int threads);

}  // namespace flexo::app
