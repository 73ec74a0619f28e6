#include "flexo/post/export.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "flexo/forms/constitutive.hpp"

namespace flexo::post {

namespace {

struct File {
    std::FILE* f = nullptr;
    explicit File(const std::string& path) : f(std::fopen(path.c_str(), "w")) {
        if (!f) throw std::runtime_error("cannot open output file: " + path);
    }
    ~File() {
        if (f) std::fclose(f);
    }
};

}  // namespace

void write_vtk(const std::string& path, const SolutionField& sol, const mesh::CellClassification& cls,
               const mat::MaterialSet& material, const ExportScaling& scaling) {
    std::vector<mesh::DisplayTri> tris;
    for (const mesh::CellInfo& info : cls.cells) {
        if (info.tag == mesh::CellTag::Outer) continue;
        mesh::bulk_rule_for_cell(info, sol.grid().boundary(), 1, &tris);
    }

    File out(path);
    std::fprintf(out.f, "# vtk DataFile Version 3.0\n");
    std::fprintf(out.f, "flexo solution\nASCII\nDATASET UNSTRUCTURED_GRID\n");
    const std::size_t npts = 3 * tris.size();
    std::fprintf(out.f, "POINTS %zu double\n", npts);
    for (const auto& t : tris)
        for (const auto& v : t) {
            const Eigen::Vector2d p = scaling.s * v + scaling.center;
            std::fprintf(out.f, "%.9e %.9e 0\n", p.x(), p.y());
        }
    std::fprintf(out.f, "CELLS %zu %zu\n", tris.size(), 4 * tris.size());
    for (std::size_t i = 0; i < tris.size(); ++i)
        std::fprintf(out.f, "3 %zu %zu %zu\n", 3 * i, 3 * i + 1, 3 * i + 2);
    std::fprintf(out.f, "CELL_TYPES %zu\n", tris.size());
    for (std::size_t i = 0; i < tris.size(); ++i) std::fprintf(out.f, "5\n");

    std::vector<forms::StateDerivatives> states;
    states.reserve(npts);
    for (const auto& t : tris)
        for (const auto& v : t) states.push_back(sol.eval(v, 1, false));

    std::fprintf(out.f, "POINT_DATA %zu\n", npts);
    std::fprintf(out.f, "VECTORS displacement double\n");
    for (const auto& st : states) std::fprintf(out.f, "%.9e %.9e 0\n", st.u(0), st.u(1));
    std::fprintf(out.f, "SCALARS phi double 1\nLOOKUP_TABLE default\n");
    for (const auto& st : states) std::fprintf(out.f, "%.9e\n", st.phi);
    std::fprintf(out.f, "SCALARS emag double 1\nLOOKUP_TABLE default\n");
    for (const auto& st : states) std::fprintf(out.f, "%.9e\n", st.E().norm() / scaling.s);
    std::fprintf(out.f, "SCALARS eps22 double 1\nLOOKUP_TABLE default\n");
    for (const auto& st : states) std::fprintf(out.f, "%.9e\n", st.eps()(1, 1) / scaling.s);
    const char* names[3] = {"sighat11", "sighat22", "sighat12"};
    const int idx[3][2] = {{0, 0}, {1, 1}, {0, 1}};
    for (int c = 0; c < 3; ++c) {
        std::fprintf(out.f, "SCALARS %s double 1\nLOOKUP_TABLE default\n", names[c]);
        for (const auto& st : states) {
            const Eigen::Matrix2d sh = forms::stress(st.eps(), st.E(), material);
            std::fprintf(out.f, "%.9e\n", sh(idx[c][0], idx[c][1]) / scaling.s);
        }
    }
}

void write_csv(const std::string& path, const CsvTable& table) {
    File out(path);
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        std::fprintf(out.f, "%s%s", table.columns[c].c_str(), c + 1 < table.columns.size() ? "," : "\n");
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            std::fprintf(out.f, "%.12e%s", row[c], c + 1 < row.size() ? "," : "\n");
    }
}

void write_matrix_market(const std::string& path, const Eigen::SparseMatrix<double>& A) {
    File out(path);
    std::fprintf(out.f, "%%%%MatrixMarket matrix coordinate real general\n");
    std::fprintf(out.f, "%d %d %d\n", static_cast<int>(A.rows()), static_cast<int>(A.cols()),
                 static_cast<int>(A.nonZeros()));
    for (int k = 0; k < A.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
            std::fprintf(out.f, "%d %d %.16e\n", static_cast<int>(it.row()) + 1,
                         static_cast<int>(it.col()) + 1, it.value());
}

void write_quadrature_csv(const std::string& path, const mesh::QuadratureScheme& quad,
                          const mesh::CellClassification& cls) {
    File out(path);
    std::fprintf(out.f, "cell,level,cx,cy,kind,x,y,w\n");
    for (std::size_t ci = 0; ci < quad.cells.size(); ++ci) {
        const mesh::LeafCell& cell = cls.cells[ci].cell;
        for (const mesh::BulkPoint& p : quad.cells[ci].bulk)
            std::fprintf(out.f, "%zu,%d,%d,%d,0,%.12e,%.12e,%.12e\n", ci, cell.level, cell.cx, cell.cy,
                         p.x.x(), p.x.y(), p.w);
        for (const mesh::BoundaryPoint& p : quad.cells[ci].boundary)
            std::fprintf(out.f, "%zu,%d,%d,%d,1,%.12e,%.12e,%.12e\n", ci, cell.level, cell.cx, cell.cy,
                         p.x.x(), p.x.y(), p.w);
    }
}

}  // namespace flexo::post
