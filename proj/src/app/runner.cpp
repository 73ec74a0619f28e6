#include "flexo/app/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>

#include "flexo/app/expr.hpp"
#include "flexo/geom/boundary_io.hpp"
#include "flexo/post/transduction.hpp"

namespace flexo::app {

using Eigen::Vector2d;

namespace {

// Penalty length scale for Eq.-style scalings: the material length, or the
// flexoelectric equivalent mu / sqrt(kappa E) when the strain-gradient
// length vanishes but the double stress is still active.
double penalty_length(const mat::MaterialParams& p) {
    if (p.l > 0) return p.l;
    const double mu = std::max({std::abs(p.mu_L), std::abs(p.mu_T), std::abs(p.mu_S)});
    if (mu > 0 && p.kappa_L > 0 && p.E > 0) return mu / std::sqrt(p.kappa_L * p.E);
    return 0;
}

sys::StabMode pick_stab(const std::string& mode, const spline::HierarchicalBasis& basis) {
    if (mode == "extended") return sys::StabMode::ExtendedBsplines;
    if (mode == "diagonal") return sys::StabMode::DiagonalScaling;
    if (mode == "none") return sys::StabMode::None;
    // auto: extended B-splines on uniform meshes, diagonal scaling on
    // hierarchical ones.
    return basis.num_levels() > 1 ? sys::StabMode::DiagonalScaling : sys::StabMode::ExtendedBsplines;
}

}  // namespace

std::shared_ptr<Pipeline> Pipeline::build(const PipelineSetup& s) {
    auto p = std::make_shared<Pipeline>();
    p->setup = s;
    p->boundary = s.boundary;

    p->basis = spline::HierarchicalBasis::make_uniform(s.degree, s.x0, s.y0, s.h, s.nx, s.ny,
                                                       std::max(1, s.max_levels));
    for (int lvl = 0; lvl < s.refine_levels; ++lvl) {
        std::vector<spline::FnKey> marked;
        for (const auto& key : p->basis.functions()) {
            if (key.level != lvl) continue;
            double xa, ya, xb, yb;
            p->basis.support(key, xa, ya, xb, yb);
            for (const auto& box : s.refine_boxes) {
                if (xb > box[0] && xa < box[2] && yb > box[1] && ya < box[3]) {
                    marked.push_back(key);
                    break;
                }
            }
        }
        if (!marked.empty()) p->basis = p->basis.refine(marked);
    }

    p->grid = std::make_unique<mesh::EmbeddingGrid>(p->basis, *p->boundary);
    p->cls = mesh::classify_cells(*p->grid);
    const int qb = s.bulk_q > 0 ? s.bulk_q : s.degree + 1;
    const int qs = s.boundary_q > 0 ? s.boundary_q : s.degree + 1;
    p->quad = mesh::build_quadrature(p->cls, *p->grid, qb, qs);

    p->bcs = s.make_bcs ? s.make_bcs(*p->boundary) : forms::BCRegionSpec{};
    p->dofs = std::make_unique<sys::DofMap>(p->basis, p->cls, p->bcs.n_electrodes);
    p->stab = sys::build_stabilization(p->basis, *p->dofs, p->cls, pick_stab(s.stab_mode, p->basis));

    if (s.penalty_mode == "auto") {
        p->cell_bounds.resize(p->cls.cells.size());
        for (std::size_t ci = 0; ci < p->cls.cells.size(); ++ci) {
            if (p->cls.cells[ci].tag != mesh::CellTag::Cut) continue;
            p->cell_bounds[ci] = sys::penalty_bounds_for_cell(p->cls.cells[ci], p->quad.cells[ci],
                                                              *p->grid, p->bcs, build_material_set(s.material));
        }
    }

    p->system = p->assemble_with_zeta(s.zeta);
    return p;
}

forms::PenaltySet Pipeline::penalties_for(std::size_t ci, const mesh::CellInfo& info, double zeta) const {
    const mat::MaterialParams& mp = setup.material;
    forms::PenaltySet out;
    const double hc = info.cell.size();
    const double lp = penalty_length(mp);
    out.beta_u = mp.E / hc * zeta;
    out.beta_v = lp * lp * mp.E / hc * zeta;
    out.beta_cu = lp * lp * mp.E / (hc * hc) * zeta;
    out.beta_phi = mp.kappa_L / hc * zeta;
    if (setup.penalty_mode == "explicit") return setup.beta_explicit;
    if (setup.penalty_mode == "auto" && ci < cell_bounds.size()) {
        const sys::PenaltyBounds& b = cell_bounds[ci];
        if (!b.unbounded) {
            if (b.has_u) out.beta_u = setup.auto_margin * b.bound_u;
            if (b.has_v) out.beta_v = setup.auto_margin * b.bound_v;
            if (b.has_cu) out.beta_cu = setup.auto_margin * b.bound_cu;
        }
    }
    return out;
}

sys::AssembledSystem Pipeline::assemble_with_zeta(double zeta) const {
    auto pen = [this, zeta](std::size_t ci, const mesh::CellInfo& info) {
        return penalties_for(ci, info, zeta);
    };
    return sys::assemble(*grid, cls, quad, *dofs, stab, bcs, build_material_set(setup.material), pen,
                         setup.loads, setup.threads);
}

bool Pipeline::solve(bool want_condition) {
    report = sys::solve_system(system.A, system.b, want_condition);
    if (!report.ok) return false;
    field = std::make_unique<post::SolutionField>(*grid, *dofs, system.expand(report.x));
    return true;
}

post::ErrorNorms Pipeline::errors() const {
    if (!setup.reference || !field) throw std::runtime_error("Pipeline::errors: missing reference or solution");
    return post::error_norms(*field, *setup.reference, quad);
}

sys::SpectralCheck Pipeline::spectral() const {
    sys::SpectralCheck sc;
    const auto exu = sys::symmetric_extremes(system.Kuu());
    const auto exp_ = sys::symmetric_extremes(system.Kphiphi());
    sc.lambda_min_uu = exu.lmin;
    sc.lambda_max_phiphi = exp_.lmax;
    sc.stable = exu.lmin > 0 && exp_.lmax < 0;
    return sc;
}

// ---------------------------------------------------------------------------
// Builtin benchmark setups.

namespace {

mat::MaterialParams corner_study_material(double b_over_b0) {
    // Domain normalized by its half-size b; b0 = 1 nm.
    const double b = b_over_b0 * 1e-9;
    mat::MaterialParams mp;
    mp.E = 152e9;
    mp.nu = 0.33;
    mp.l = 1e-9 / b;
    mp.kappa_L = 141e-9;
    mp.d_piezo = Vector2d(0, 1);
    mp.e_L = 8.8;
    mp.e_T = -4.4;
    mp.e_S = 4.4;
    mp.mu_L = 150e-6 / b;
    mp.mu_T = 110e-6 / b;
    mp.mu_S = 110e-6 / b;
    return mp;
}

forms::BCRegionSpec all_dirichlet_bcs(const geom::BoundaryModel& model,
                                      std::shared_ptr<post::ReferenceSolution> ref, bool corners_on) {
    forms::BCRegionSpec spec;
    forms::RegionBC bc;
    bc.u_kind = forms::MechKind::Dirichlet;
    bc.u_data = reference_u_data(ref);
    bc.v_kind = forms::MechKind::Dirichlet;
    bc.v_data = reference_v_data(ref);
    bc.e_kind = forms::ElecKind::Dirichlet;
    bc.e_data = reference_phi_data(ref);
    for (int r = 0; r < static_cast<int>(model.regions().size()); ++r) spec.regions[r] = bc;
    for (int c = 0; c < static_cast<int>(model.corners().size()); ++c) {
        forms::CornerBC cb;
        cb.dirichlet = corners_on;
        if (corners_on) cb.data = reference_u_data(ref);
        spec.corners[c] = cb;
    }
    return spec;
}

}  // namespace

PipelineSetup corner_study_setup(double b_over_b0, bool corners_on, double zeta, int cells, int degree) {
    PipelineSetup s;
    s.boundary = std::make_shared<geom::BoundaryModel>(square_boundary(1.0));
    // Boundary sits mid-cell in the border cells.
    s.h = 2.0 / (cells - 1);
    s.nx = s.ny = cells;
    s.x0 = s.y0 = -1.0 - 0.5 * s.h;
    s.degree = degree;
    s.material = corner_study_material(b_over_b0);
    s.zeta = zeta;
    auto ref = corner_study_reference();
    s.reference = ref;
    s.loads = manufactured_loads(ref, build_material_set(s.material));
    s.make_bcs = [ref, corners_on](const geom::BoundaryModel& model) {
        return all_dirichlet_bcs(model, ref, corners_on);
    };
    return s;
}

PipelineSetup sensitivity_setup(double chi_min_target, double zeta, int cells, int degree) {
    // Sensitivity study at the weak-gradient scale of the corner benchmark,
    // where the internal length stays below the cell size.
    PipelineSetup s = corner_study_setup(100.0, true, zeta, cells, degree);
    // Corner cut cells carry the squared boundary fraction; pick the offset
    // so that min_c chi_c hits the requested value.
    const double f = std::sqrt(chi_min_target);
    s.h = 2.0 / (cells - 2 + 2 * f);
    s.x0 = s.y0 = -1.0 - (1.0 - f) * s.h;
    return s;
}

PipelineSetup convergence_setup(int cells, int degree, double zeta) {
    PipelineSetup s;
    s.boundary = std::make_shared<geom::BoundaryModel>(
        circle_with_square_hole(1.0, 0.4, 30.0 * M_PI / 180.0));
    s.h = 2.0 / (cells - 1);
    s.nx = s.ny = cells;
    s.x0 = s.y0 = -1.0 - 0.5 * s.h;
    s.degree = degree;
    mat::MaterialParams mp;
    mp.E = 100e9;
    mp.nu = 0.37;
    mp.l = 2e-3;  // 2 nm over the 1 um radius
    mp.kappa_L = 11e-9;
    mp.d_piezo = Vector2d(0, 1);
    mp.e_L = 8.8;
    mp.e_T = -4.4;
    mp.e_S = 1.1;
    mp.mu_L = 0.5;
    mp.mu_T = 1.0;
    mp.mu_S = 0.5;
    s.material = mp;
    s.zeta = zeta;
    auto ref = sinusoid_reference();
    s.reference = ref;
    s.loads = manufactured_loads(ref, build_material_set(mp));
    s.make_bcs = [ref](const geom::BoundaryModel& model) { return all_dirichlet_bcs(model, ref, true); };
    return s;
}

PipelineSetup beam_setup(double a_prime, BeamCoupling coupling, double zeta, int cells_across,
                         int degree) {
    // Physical: width a = a' mu_T / |e_T|, length L = 20 a; solver
    // coordinates are normalized by L.
    const double mu_T_phys = 1e-6, e_T_phys = -4.4;
    const double a_phys = a_prime * mu_T_phys / std::abs(e_T_phys);
    const double L_phys = 20.0 * a_phys;
    const double abar = 0.05;  // a / L

    PipelineSetup s;
    s.boundary = std::make_shared<geom::BoundaryModel>(rectangle_boundary(0, -abar / 2, 1, abar / 2));
    s.h = abar / (cells_across - 1);
    s.ny = cells_across;
    s.nx = static_cast<int>(std::lround(1.0 / s.h)) + 1;
    s.x0 = -0.5 * s.h;
    s.y0 = -abar / 2 - 0.5 * s.h;
    s.degree = degree;
    s.max_levels = 3;
    s.refine_levels = 2;
    const double reach = 1.5 * abar;
    s.refine_boxes = {{s.x0, s.y0, reach, s.y0 + s.ny * s.h},
                      {1.0 - reach, s.y0, s.x0 + s.nx * s.h, s.y0 + s.ny * s.h}};

    mat::MaterialParams mp;
    mp.E = 100e9;
    mp.nu = 0;
    mp.l = 0;
    mp.kappa_L = 11e-9;
    mp.d_piezo = Vector2d(0, 1);
    if (coupling != BeamCoupling::Flexo) mp.e_T = e_T_phys;
    if (coupling != BeamCoupling::Piezo) mp.mu_T = mu_T_phys / L_phys;
    s.material = mp;
    s.zeta = zeta;

    s.make_bcs = [](const geom::BoundaryModel& model) {
        forms::BCRegionSpec spec;
        forms::RegionBC left;
        left.u_kind = forms::MechKind::Dirichlet;
        left.v_kind = forms::MechKind::Dirichlet;
        left.v_mask = {false, true};  // only the transverse rotation is clamped
        spec.regions[model.region_id("left")] = left;
        forms::RegionBC right;
        right.e_kind = forms::ElecKind::Dirichlet;
        spec.regions[model.region_id("right")] = right;
        for (int c = 0; c < static_cast<int>(model.corners().size()); ++c) {
            const geom::Corner& corner = model.corners()[static_cast<size_t>(c)];
            forms::CornerBC cb;
            if (corner.name == "bl" || corner.name == "tl") {
                cb.dirichlet = true;
            } else if (corner.name == "tr") {
                cb.dirichlet = false;
                cb.data = [](const Vector2d&, const geom::BoundaryFrame*) { return Vector2d(0, -1.0); };
            }
            spec.corners[c] = cb;
        }
        return spec;
    };
    return s;
}

PipelineSetup pyramid_setup(double a_um, double zeta, int cells_across_height, int degree) {
    const double a_phys = a_um * 1e-6;
    PipelineSetup s;
    s.boundary = std::make_shared<geom::BoundaryModel>(trapezoid_boundary(1.5, 0.5, 1.0));
    s.h = 1.0 / (cells_across_height - 1);
    s.ny = cells_across_height;
    s.nx = static_cast<int>(std::lround(3.0 / s.h)) + 1;
    s.y0 = -0.5 * s.h;
    s.x0 = -0.5 * s.nx * s.h;
    s.degree = degree;

    mat::MaterialParams mp;
    mp.E = 100e9;
    mp.nu = 0.37;
    mp.l = 0;
    mp.kappa_L = 11e-9;
    mp.mu_L = 1e-6 / a_phys;
    mp.mu_T = 1e-6 / a_phys;
    mp.mu_S = 0;
    s.material = mp;
    s.zeta = zeta;

    const double F = 4.5e3;  // 4.5 N/mm as force per unit thickness [N/m]
    s.make_bcs = [F](const geom::BoundaryModel& model) {
        forms::BCRegionSpec spec;
        spec.n_electrodes = 1;
        forms::RegionBC bottom;
        bottom.u_kind = forms::MechKind::Dirichlet;
        bottom.e_kind = forms::ElecKind::Electrode;
        bottom.electrode = 0;
        spec.regions[model.region_id("bottom")] = bottom;
        forms::RegionBC top;
        top.u_kind = forms::MechKind::Neumann;
        top.u_data = [F](const Vector2d&, const geom::BoundaryFrame*) { return Vector2d(0, -F); };
        top.e_kind = forms::ElecKind::Dirichlet;
        spec.regions[model.region_id("top")] = top;
        for (int c = 0; c < static_cast<int>(model.corners().size()); ++c) {
            const geom::Corner& corner = model.corners()[static_cast<size_t>(c)];
            forms::CornerBC cb;
            cb.dirichlet = (corner.name == "bl" || corner.name == "br");
            spec.corners[c] = cb;
        }
        return spec;
    };
    return s;
}

// ---------------------------------------------------------------------------
// CLI case drivers.

namespace {

void ensure_dir(const std::string& dir) {
    if (!dir.empty()) std::filesystem::create_directories(dir);
}

std::string join_path(const std::string& dir, const std::string& name) {
    return dir.empty() ? name : dir + "/" + name;
}

void maybe_dump(const RunConfig& cfg, const std::string& out_dir, const Pipeline& p) {
    if (cfg.boolean("output.vtk", false) && p.field)
        post::write_vtk(join_path(out_dir, "solution.vtk"), *p.field, p.cls,
                        build_material_set(p.setup.material));
    if (cfg.boolean("output.matrix_market", false))
        post::write_matrix_market(join_path(out_dir, "system.mtx"), p.system.A);
    if (cfg.boolean("output.quadrature_csv", false))
        post::write_quadrature_csv(join_path(out_dir, "quadrature.csv"), p.quad, p.cls);
}

CaseResult corner_study_case(const RunConfig& cfg, const std::string& out_dir, int threads) {
    CaseResult res;
    const auto sizes = cfg.numbers("case.b_over_b0", std::vector<double>{0.01, 1.0, 100.0});
    const std::string mode = cfg.str("case.corners", std::string("both"));
    const int cells = static_cast<int>(cfg.number("mesh.cells", 32));
    const double zeta = cfg.number("penalty.zeta", 100);
    const int degree = static_cast<int>(cfg.number("case.p", 3));

    post::CsvTable table;
    table.columns = {"b_over_b0", "corners", "rel_l2", "l2", "h1", "kappa1", "residual"};
    for (double size : sizes) {
        for (int corners = 1; corners >= 0; --corners) {
            if (mode == "on" && corners == 0) continue;
            if (mode == "off" && corners == 1) continue;
            PipelineSetup s = corner_study_setup(size, corners == 1, zeta, cells, degree);
            s.threads = threads;
            auto p = Pipeline::build(s);
            if (!p->solve(true)) {
                res.exit_code = 3;
                res.lines.push_back("solver failed: " + p->report.error);
                return res;
            }
            const post::ErrorNorms e = p->errors();
            table.rows.push_back({size, static_cast<double>(corners), e.rel_l2(), e.l2, e.h1,
                                  p->report.kappa1, p->report.residual});
            res.lines.push_back("corner-study b/b0=" + std::to_string(size) +
                                (corners ? " corners=on" : " corners=off") +
                                " rel_l2=" + std::to_string(e.rel_l2()));
        }
    }
    post::write_csv(join_path(out_dir, "corner_study.csv"), table);
    return res;
}

CaseResult sensitivity_case(const RunConfig& cfg, const std::string& out_dir, int threads) {
    CaseResult res;
    const auto zetas = cfg.numbers("case.zeta_values",
                                   std::vector<double>{1, 10, 100, 1e3, 1e4, 1e5, 1e6});
    const auto chis = cfg.numbers("case.chi_min_targets", std::vector<double>{0.937, 0.009});
    const int cells = static_cast<int>(cfg.number("mesh.cells", 32));
    const int degree = static_cast<int>(cfg.number("case.p", 3));

    post::CsvTable table;
    table.columns = {"chi_min", "zeta", "stable", "lambda_min_uu", "lambda_max_phiphi", "kappa1", "rel_l2"};
    for (double chi : chis) {
        PipelineSetup s = sensitivity_setup(chi, 100, cells, degree);
        s.threads = threads;
        auto p = Pipeline::build(s);
        for (double z : zetas) {
            sys::AssembledSystem sysz = p->assemble_with_zeta(z);
            const auto exu = sys::symmetric_extremes(sysz.Kuu());
            const auto exp_ = sys::symmetric_extremes(sysz.Kphiphi());
            const bool stable = exu.lmin > 0 && exp_.lmax < 0;
            sys::SolveReport rep = sys::solve_system(sysz.A, sysz.b, true);
            double rel = -1;
            if (rep.ok) {
                post::SolutionField f(*p->grid, *p->dofs, sysz.expand(rep.x));
                rel = post::error_norms(f, *s.reference, p->quad).rel_l2();
            }
            table.rows.push_back({p->cls.chi_min, z, stable ? 1.0 : 0.0, exu.lmin, exp_.lmax,
                                  rep.kappa1, rel});
            res.lines.push_back("sensitivity chi_min=" + std::to_string(p->cls.chi_min) +
                                " zeta=" + std::to_string(z) + (stable ? " stable" : " UNSTABLE"));
        }
    }
    post::write_csv(join_path(out_dir, "sensitivity.csv"), table);
    return res;
}

CaseResult beam_case(const RunConfig& cfg, const std::string& out_dir, int threads) {
    CaseResult res;
    const auto aprimes = cfg.numbers("case.a_prime", std::vector<double>{1.76, 5, 20});
    const double zeta = cfg.number("penalty.zeta", 100);
    const int cells = static_cast<int>(cfg.number("case.cells_across", 8));
    const int degree = static_cast<int>(cfg.number("case.p", 3));

    post::CsvTable table;
    table.columns = {"a_prime",      "keff_piezo",        "keff_flexo",          "keff_flexopiezo",
                     "eprime_flexo", "eprime_flexopiezo", "analytic_flexo",      "analytic_flexopiezo"};
    for (double ap : aprimes) {
        double keff[3] = {0, 0, 0};
        const BeamCoupling modes[3] = {BeamCoupling::Piezo, BeamCoupling::Flexo, BeamCoupling::FlexoPiezo};
        for (int m = 0; m < 3; ++m) {
            PipelineSetup s = beam_setup(ap, modes[m], zeta, cells, degree);
            s.threads = threads;
            auto p = Pipeline::build(s);
            if (!p->solve(false)) {
                res.exit_code = 3;
                res.lines.push_back("beam solver failed: " + p->report.error);
                return res;
            }
            keff[m] = post::coupling_factor(*p->field, build_material_set(s.material), p->quad).k_eff;
        }
        const double ef = keff[1] / keff[0];
        const double efp = keff[2] / keff[0];
        table.rows.push_back({ap, keff[0], keff[1], keff[2], ef, efp, post::eprime_flexo_estimate(ap),
                              post::eprime_flexopiezo_estimate(ap)});
        res.lines.push_back("beam a'=" + std::to_string(ap) + " e'_flexo=" + std::to_string(ef) +
                            " (analytic " + std::to_string(post::eprime_flexo_estimate(ap)) + ")" +
                            " e'_fp=" + std::to_string(efp) + " (analytic " +
                            std::to_string(post::eprime_flexopiezo_estimate(ap)) + ")");
    }
    post::write_csv(join_path(out_dir, "beam.csv"), table);
    return res;
}

CaseResult pyramid_case(const RunConfig& cfg, const std::string& out_dir, int threads) {
    CaseResult res;
    const auto sizes = cfg.numbers("case.a_values_um", std::vector<double>{7.5, 75, 750});
    const double zeta = cfg.number("penalty.zeta", 100);
    const int cells = static_cast<int>(cfg.number("case.cells_across", 42));
    const int degree = static_cast<int>(cfg.number("case.p", 3));

    post::CsvTable table;
    table.columns = {"a_um", "V", "E_eff", "phi_constancy_rel"};
    bool first = true;
    for (double a_um : sizes) {
        PipelineSetup s = pyramid_setup(a_um, zeta, cells, degree);
        s.threads = threads;
        auto p = Pipeline::build(s);
        if (!p->solve(false)) {
            res.exit_code = 3;
            res.lines.push_back("pyramid solver failed: " + p->report.error);
            return res;
        }
        const double V = p->field->electrode_value(0);
        const double a_phys = a_um * 1e-6;
        // Constancy of phi over the sensing electrode.
        double dev = 0;
        const int bottom = p->boundary->region_id("bottom");
        for (std::size_t ci = 0; ci < p->quad.cells.size(); ++ci)
            for (const auto& bp : p->quad.cells[ci].boundary)
                if (bp.region_id == bottom)
                    dev = std::max(dev, std::abs(p->field->eval(bp.x, 0, false).phi - V));
        const double constancy = std::abs(V) > 0 ? dev / std::abs(V) : dev;
        table.rows.push_back({a_um, V, V / a_phys, constancy});
        res.lines.push_back("pyramid a=" + std::to_string(a_um) + "um V=" + std::to_string(V) +
                            " E_eff=" + std::to_string(V / a_phys) +
                            " constancy=" + std::to_string(constancy));
        if (first && cfg.boolean("output.vtk", false)) {
            post::ExportScaling sc;
            sc.s = a_phys;
            post::write_vtk(join_path(out_dir, "pyramid.vtk"), *p->field, p->cls,
                            build_material_set(s.material), sc);
        }
        first = false;
    }
    post::write_csv(join_path(out_dir, "pyramid.csv"), table);
    return res;
}

// Free-form problem from the configuration file.
PipelineSetup custom_setup(const RunConfig& cfg) {
    PipelineSetup s;
    const std::string geom_kind = cfg.str("geometry.builtin", std::string(""));
    if (!geom_kind.empty()) {
        if (geom_kind == "square") {
            s.boundary = std::make_shared<geom::BoundaryModel>(square_boundary(cfg.number("geometry.half", 1.0)));
        } else if (geom_kind == "circle") {
            s.boundary = std::make_shared<geom::BoundaryModel>(circle_boundary(cfg.number("geometry.radius", 1.0)));
        } else if (geom_kind == "circle-with-hole") {
            s.boundary = std::make_shared<geom::BoundaryModel>(circle_with_square_hole(
                cfg.number("geometry.radius", 1.0), cfg.number("geometry.hole_side", 0.4),
                cfg.number("geometry.hole_angle_deg", 30.0) * M_PI / 180.0));
        } else if (geom_kind == "rectangle") {
            s.boundary = std::make_shared<geom::BoundaryModel>(
                rectangle_boundary(cfg.number("geometry.x0"), cfg.number("geometry.y0"),
                                   cfg.number("geometry.x1"), cfg.number("geometry.y1")));
        } else if (geom_kind == "trapezoid") {
            s.boundary = std::make_shared<geom::BoundaryModel>(
                trapezoid_boundary(cfg.number("geometry.half_bottom", 1.5),
                                   cfg.number("geometry.half_top", 0.5), cfg.number("geometry.height", 1.0)));
        } else {
            throw std::runtime_error("config: unknown geometry.builtin '" + geom_kind + "'");
        }
    } else {
        s.boundary = std::make_shared<geom::BoundaryModel>(
            geom::load_boundary_file(cfg.str("geometry.file")));
    }

    const auto cells = cfg.numbers("mesh.cells", std::vector<double>{32, 32});
    if (cells.size() != 2) throw std::runtime_error("config: mesh.cells must be [nx, ny]");
    Vector2d lo, hi;
    s.boundary->bbox(lo, hi);
    s.nx = static_cast<int>(cells[0]);
    s.ny = static_cast<int>(cells[1]);
    const double margin = cfg.number("mesh.margin_cells", 0.5);
    const double hx = (hi.x() - lo.x()) / (s.nx - 2 * margin);
    const double hy = (hi.y() - lo.y()) / (s.ny - 2 * margin);
    s.h = std::max(hx, hy);
    s.x0 = lo.x() - margin * s.h;
    s.y0 = lo.y() - margin * s.h;
    s.degree = static_cast<int>(cfg.number("case.p", 3));
    if (s.degree < 3) throw std::runtime_error("config: case.p must be at least 3 (boundary terms need third derivatives)");

    s.max_levels = static_cast<int>(cfg.number("mesh.levels", 1));
    s.refine_levels = s.max_levels - 1;
    for (const std::string& name : cfg.children("mesh.refine")) {
        const auto box = cfg.numbers("mesh.refine." + name + ".box");
        if (box.size() != 4) throw std::runtime_error("config: mesh.refine." + name + ".box must be [xa,ya,xb,yb]");
        s.refine_boxes.push_back({box[0], box[1], box[2], box[3]});
    }

    mat::MaterialParams mp;
    mp.E = cfg.number("materials.E");
    mp.nu = cfg.number("materials.nu", 0.0);
    mp.l = cfg.number("materials.l", 0.0);
    mp.kappa_L = cfg.number("materials.kappa", 0.0);
    mp.e_L = cfg.number("materials.e_L", 0.0);
    mp.e_T = cfg.number("materials.e_T", 0.0);
    mp.e_S = cfg.number("materials.e_S", 0.0);
    mp.mu_L = cfg.number("materials.mu_L", 0.0);
    mp.mu_T = cfg.number("materials.mu_T", 0.0);
    mp.mu_S = cfg.number("materials.mu_S", 0.0);
    const auto dp = cfg.numbers("materials.d_piezo", std::vector<double>{1, 0});
    mp.d_piezo = Vector2d(dp[0], dp[1]);
    mp.flexo_angle = cfg.number("materials.flexo_angle", 0.0);
    mp.mode = cfg.str("materials.plane", std::string("strain")) == "stress" ? mat::PlaneMode::Stress
                                                                            : mat::PlaneMode::Strain;
    s.material = mp;
    const auto violations = mat::check_restrictions(build_material_set(mp), mp, mp.kappa_L != 0);
    if (!violations.empty()) {
        std::string msg = "config: material restrictions violated:";
        for (const auto& v : violations) msg += " " + v + ";";
        throw std::runtime_error(msg);
    }

    s.penalty_mode = cfg.str("penalty.mode", std::string("zeta"));
    s.zeta = cfg.number("penalty.zeta", 100);
    s.auto_margin = cfg.number("penalty.margin", 1.1);
    if (s.penalty_mode == "explicit") {
        s.beta_explicit.beta_u = cfg.number("penalty.beta_u");
        s.beta_explicit.beta_v = cfg.number("penalty.beta_v", 0.0);
        s.beta_explicit.beta_cu = cfg.number("penalty.beta_cu", 0.0);
        s.beta_explicit.beta_phi = cfg.number("penalty.beta_phi", 0.0);
    }
    s.stab_mode = cfg.str("solver.stabilization", std::string("auto"));
    s.bulk_q = static_cast<int>(cfg.number("solver.bulk_q", 0));
    s.boundary_q = static_cast<int>(cfg.number("solver.boundary_q", 0));

    // Bulk loads from expressions.
    if (cfg.has("loads.body_force")) {
        const auto ex = cfg.strings("loads.body_force");
        if (ex.size() != 2) throw std::runtime_error("config: loads.body_force must be [expr, expr]");
        const Expr b1 = Expr::parse(ex[0]), b2 = Expr::parse(ex[1]);
        s.loads.body_force = [b1, b2](const Vector2d& x) {
            return Vector2d(b1.eval(x.x(), x.y()), b2.eval(x.x(), x.y()));
        };
    }
    if (cfg.has("loads.free_charge")) {
        const Expr q = Expr::parse(cfg.str("loads.free_charge"));
        s.loads.free_charge = [q](const Vector2d& x) { return q.eval(x.x(), x.y()); };
    }

    // Boundary conditions per region label.
    s.make_bcs = [&cfg](const geom::BoundaryModel& model) {
        forms::BCRegionSpec spec;
        int max_electrode = -1;
        for (const std::string& name : cfg.children("bc.region")) {
            const int rid = model.region_id(name);
            if (rid < 0) throw std::runtime_error("config: bc.region." + name + " does not match any boundary region");
            const std::string base = "bc.region." + name;
            forms::RegionBC bc;
            auto vec_data = [&cfg, &base](const std::string& key) -> forms::VectorData {
                if (!cfg.has(base + "." + key)) return nullptr;
                const auto ex = cfg.strings(base + "." + key);
                if (ex.size() != 2) throw std::runtime_error("config: " + base + "." + key + " must be [expr, expr]");
                const Expr e1 = Expr::parse(ex[0]), e2 = Expr::parse(ex[1]);
                return [e1, e2](const Vector2d& x, const geom::BoundaryFrame*) {
                    return Vector2d(e1.eval(x.x(), x.y()), e2.eval(x.x(), x.y()));
                };
            };
            const std::string ukind = cfg.str(base + ".u", std::string("neumann"));
            bc.u_kind = ukind == "dirichlet" ? forms::MechKind::Dirichlet : forms::MechKind::Neumann;
            bc.u_data = vec_data("u_data");
            if (cfg.has(base + ".u_mask")) {
                const auto m = cfg.numbers(base + ".u_mask");
                bc.u_mask = {m.size() > 0 && m[0] != 0, m.size() > 1 && m[1] != 0};
            }
            const std::string vkind = cfg.str(base + ".v", std::string("neumann"));
            bc.v_kind = vkind == "dirichlet" ? forms::MechKind::Dirichlet : forms::MechKind::Neumann;
            bc.v_data = vec_data("v_data");
            if (cfg.has(base + ".v_mask")) {
                const auto m = cfg.numbers(base + ".v_mask");
                bc.v_mask = {m.size() > 0 && m[0] != 0, m.size() > 1 && m[1] != 0};
            }
            const std::string ekind = cfg.str(base + ".elec", std::string("neumann"));
            if (ekind == "dirichlet") {
                bc.e_kind = forms::ElecKind::Dirichlet;
            } else if (ekind == "electrode") {
                bc.e_kind = forms::ElecKind::Electrode;
                bc.electrode = static_cast<int>(cfg.number(base + ".electrode", 0));
                max_electrode = std::max(max_electrode, bc.electrode);
            } else {
                bc.e_kind = forms::ElecKind::Neumann;
            }
            if (cfg.has(base + ".elec_data")) {
                const Expr e = Expr::parse(cfg.str(base + ".elec_data"));
                bc.e_data = [e](const Vector2d& x, const geom::BoundaryFrame*) { return e.eval(x.x(), x.y()); };
            }
            spec.regions[rid] = bc;
        }
        for (const std::string& name : cfg.children("bc.corner")) {
            const std::string base = "bc.corner." + name;
            int idx = -1;
            for (int c = 0; c < static_cast<int>(model.corners().size()); ++c)
                if (model.corners()[static_cast<size_t>(c)].name == name) idx = c;
            if (idx < 0 && !name.empty() && std::isdigit(static_cast<unsigned char>(name[0])))
                idx = std::stoi(name);
            if (idx < 0 || idx >= static_cast<int>(model.corners().size()))
                throw std::runtime_error("config: bc.corner." + name + " does not match any corner");
            forms::CornerBC cb;
            cb.dirichlet = cfg.str(base + ".kind", std::string("neumann-j")) == "dirichlet-u";
            if (cfg.has(base + ".data")) {
                const auto ex = cfg.strings(base + ".data");
                if (ex.size() != 2) throw std::runtime_error("config: " + base + ".data must be [expr, expr]");
                const Expr e1 = Expr::parse(ex[0]), e2 = Expr::parse(ex[1]);
                cb.data = [e1, e2](const Vector2d& x, const geom::BoundaryFrame*) {
                    return Vector2d(e1.eval(x.x(), x.y()), e2.eval(x.x(), x.y()));
                };
            }
            spec.corners[idx] = cb;
        }
        spec.n_electrodes = max_electrode + 1;
        return spec;
    };

    const std::string refname = cfg.str("case.reference", std::string(""));
    if (refname == "corner-study") {
        s.reference = corner_study_reference();
    } else if (refname == "sinusoid") {
        s.reference = sinusoid_reference();
    } else if (!refname.empty()) {
        throw std::runtime_error("config: unknown case.reference '" + refname + "'");
    }
    if (cfg.boolean("loads.manufactured", false)) {
        if (!s.reference) throw std::runtime_error("config: loads.manufactured requires case.reference");
        s.loads = manufactured_loads(s.reference, build_material_set(s.material));
    }
    return s;
}

CaseResult custom_case(const RunConfig& cfg, const std::string& out_dir, int threads) {
    CaseResult res;
    PipelineSetup s = custom_setup(cfg);
    s.threads = threads;
    auto p = Pipeline::build(s);
    for (const std::string& w : p->system.warnings) res.lines.push_back("warning: " + w);
    if (!p->solve(cfg.boolean("solver.condition", false))) {
        res.exit_code = 3;
        res.lines.push_back("solver failed: " + p->report.error);
        return res;
    }
    res.lines.push_back("solved: " + std::to_string(p->system.n_dofs()) + " dofs, residual " +
                        std::to_string(p->report.residual));
    if (p->report.kappa1 > 0) res.lines.push_back("kappa1 ~ " + std::to_string(p->report.kappa1));
    if (s.reference) {
        const post::ErrorNorms e = p->errors();
        res.lines.push_back("errors: L2 " + std::to_string(e.l2) + " (rel " + std::to_string(e.rel_l2()) +
                            "), H1 " + std::to_string(e.h1) + ", H2 " + std::to_string(e.h2) + ", H3 " +
                            std::to_string(e.h3));
    }
    maybe_dump(cfg, out_dir, *p);
    return res;
}

}  // namespace

CaseResult run_solve(const RunConfig& cfg, const std::string& out_dir, int threads) {
    ensure_dir(out_dir);
    std::string name;
    try {
        name = cfg.str("case.name");
    } catch (const std::exception& e) {
        return {2, {e.what()}};
    }
    try {
        if (name == "corner-study") return corner_study_case(cfg, out_dir, threads);
        if (name == "sensitivity") return sensitivity_case(cfg, out_dir, threads);
        if (name == "convergence") return run_converge(cfg, out_dir, threads);
        if (name == "beam") return beam_case(cfg, out_dir, threads);
        if (name == "pyramid") return pyramid_case(cfg, out_dir, threads);
        if (name == "custom") return custom_case(cfg, out_dir, threads);
    } catch (const std::exception& e) {
        const std::string what = e.what();
        return {what.rfind("config", 0) == 0 ? 2 : 3, {what}};
    }
    return {2, {"unknown case.name '" + name + "'"}};
}

CaseResult run_converge(const RunConfig& cfg, const std::string& out_dir, int threads) {
    ensure_dir(out_dir);
    CaseResult res;
    try {
        const auto meshes = cfg.numbers("case.meshes", std::vector<double>{16, 32, 64, 128});
        if (meshes.size() < 1) return {2, {"config: case.meshes must name at least one mesh"}};
        const auto degrees = cfg.numbers("case.degrees", std::vector<double>{3, 4});
        const double zeta = cfg.number("penalty.zeta", 100);

        post::CsvTable errs;
        errs.columns = {"cells", "h"};
        for (double d : degrees)
            for (const char* n : {"l2", "h1", "h2", "h3"})
                errs.columns.push_back(std::string(n) + "_p" + std::to_string(static_cast<int>(d)));

        std::vector<std::vector<double>> all(meshes.size());
        for (std::size_t mi = 0; mi < meshes.size(); ++mi) {
            const int cells = static_cast<int>(meshes[mi]);
            std::vector<double> row = {static_cast<double>(cells), 2.0 / (cells - 1)};
            for (double d : degrees) {
                PipelineSetup s = convergence_setup(cells, static_cast<int>(d), zeta);
                s.threads = threads;
                auto p = Pipeline::build(s);
                if (!p->solve(false)) return {3, {"solver failed: " + p->report.error}};
                const post::ErrorNorms e = p->errors();
                row.insert(row.end(), {e.l2, e.h1, e.h2, e.h3});
                res.lines.push_back("convergence cells=" + std::to_string(cells) + " p=" +
                                    std::to_string(static_cast<int>(d)) + " L2=" + std::to_string(e.l2));
            }
            errs.rows.push_back(row);
            all[mi] = row;
        }
        post::write_csv(join_path(out_dir, "convergence.csv"), errs);

        if (meshes.size() >= 2) {
            post::CsvTable rates;
            rates.columns = {"cells_fine"};
            for (double d : degrees)
                for (const char* n : {"l2", "h1", "h2", "h3"})
                    rates.columns.push_back(std::string("rate_") + n + "_p" + std::to_string(static_cast<int>(d)));
            for (std::size_t mi = 1; mi < meshes.size(); ++mi) {
                std::vector<double> row = {meshes[mi]};
                const double hr = std::log2(all[mi - 1][1] / all[mi][1]);
                for (std::size_t c = 2; c < all[mi].size(); ++c)
                    row.push_back(std::log2(all[mi - 1][c] / all[mi][c]) / hr);
                rates.rows.push_back(row);
                std::string line = "rates at cells=" + std::to_string(static_cast<int>(meshes[mi])) + ":";
                for (std::size_t c = 1; c < row.size(); ++c) line += " " + std::to_string(row[c]);
                res.lines.push_back(line);
            }
            post::write_csv(join_path(out_dir, "rates.csv"), rates);
        }
    } catch (const std::exception& e) {
        const std::string what = e.what();
        return {what.rfind("config", 0) == 0 ? 2 : 3, {what}};
    }
    return res;
}

CaseResult run_sweep(RunConfig cfg, const std::string& param, const std::vector<double>& values,
                     const std::string& out_dir, int threads) {
    ConfigValue arr;
    arr.kind = ConfigValue::Kind::Array;
    for (double v : values) {
        ConfigValue e;
        e.kind = ConfigValue::Kind::Number;
        e.num = v;
        arr.array.push_back(e);
    }
    if (param == "zeta") {
        cfg.set("case.zeta_values", arr);
    } else if (param == "b") {
        cfg.set("case.b_over_b0", arr);
    } else if (param == "a") {
        const std::string name = cfg.str("case.name", std::string(""));
        cfg.set(name == "beam" ? "case.a_prime" : "case.a_values_um", arr);
    } else {
        return {2, {"unknown sweep parameter '" + param + "' (expected zeta, a or b)"}};
    }
    return run_solve(cfg, out_dir, threads);
}

}  // namespace flexo::app
