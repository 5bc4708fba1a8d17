#include "cdhom/cell_homog.hpp"

#include <cmath>
#include <stdexcept>

namespace cdhom {

const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::numeric_cell_solve: return "numeric-cell-solve";
        case Provenance::harmonic_1d: return "harmonic-1d";
        case Provenance::layered_2d: return "layered-2d";
        case Provenance::constant: return "constant";
    }
    return "?";
}

bool HomogenizedTensor::spd_spot_check() const {
    if (dim == 1) return m.m[0][0] > 0.0;
    const double e1 = m.m[0][0];
    const double e2 = m.m[1][1];
    const double e12 = m.m[0][0] + m.m[0][1] + m.m[1][0] + m.m[1][1];
    return e1 > 0.0 && e2 > 0.0 && e12 > 0.0;
}

double CellSolution::corrector_mean(int dir) const {
    const Vec m = assemble_lumped_mass(mesh, &vertex_map, n_unknowns);
    double s = 0.0, total = 0.0;
    for (int i = 0; i < n_unknowns; ++i) {
        s += m[i] * corrector[dir][i];
        total += m[i];
    }
    return s / total;
}

HomogenizedTensor harmonic_mean_1d(const std::function<double(double)>& a,
                                   int n_quad) {
    if (n_quad < 16)
        throw std::invalid_argument("harmonic_mean_1d: n_quad < 16");
    double s = 0.0;
    for (int k = 0; k < n_quad; ++k) {
        const double v = a((k + 0.5) / n_quad);
        if (!(v > 0.0))
            throw std::invalid_argument(
                "harmonic_mean_1d: nonpositive profile sample");
        s += 1.0 / v;
    }
    HomogenizedTensor t;
    t.dim = 1;
    t.m.m[0][0] = (double)n_quad / s;
    t.provenance = Provenance::harmonic_1d;
    return t;
}

HomogenizedTensor harmonic_mean_1d(const Profile& a, int n_quad) {
    return harmonic_mean_1d([&a](double y) { return a(y); }, n_quad);
}

namespace {

// Periodic identification of the criss-cross mesh on the unit cell:
// grid vertex (i,j) -> (i mod n, j mod n); centers stay distinct.
std::vector<int> torus_vertex_map(const Mesh& mesh, int& n_unknowns) {
    const int n = mesh.grid_n;
    std::vector<int> map(mesh.n_vertices(), -1);
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            map[mesh.grid_vertex(i, j)] =
                (j % n) * n + (i % n);  // n^2 periodic grid unknowns
    const int ng = n * n;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            map[mesh.center_vertex(i, j)] = ng + j * n + i;
    n_unknowns = 2 * n * n;
    return map;
}

}  // namespace

CellSolution solve_cell_problems(const CoefficientField& coeff, int n) {
    if (coeff.dim() != 2)
        throw std::invalid_argument("solve_cell_problems: requires a 2D coefficient");
    if (n < 4) throw std::invalid_argument("solve_cell_problems: n < 4");
    if (!coeff.symmetric())
        throw std::invalid_argument(
            "solve_cell_problems: nonsymmetric coefficient (conjugate gradients "
            "requires a symmetric form; layered media have a closed form)");

    CellSolution sol;
    sol.mesh = build_crisscross_mesh(n);
    sol.vertex_map = torus_vertex_map(sol.mesh, sol.n_unknowns);

    const auto coeff_at = [&coeff](int, const double* bary) {
        return coeff.eval_cell(bary);
    };
    const SparseMatrix K =
        assemble_stiffness(sol.mesh, coeff_at, &sol.vertex_map, sol.n_unknowns);

    const Vec mlump =
        assemble_lumped_mass(sol.mesh, &sol.vertex_map, sol.n_unknowns);
    const double cell_measure = sol.mesh.total_measure();

    for (int dir = 0; dir < 2; ++dir) {
        // rhs_j = -int A e_dir . grad phi_j
        Vec rhs(sol.n_unknowns, 0.0);
        const int ne = sol.mesh.n_elements();
        for (int e = 0; e < ne; ++e) {
            const ElemGeom g = elem_geom(sol.mesh, e);
            const Mat2 A = coeff.eval_cell(g.bary);
            const double ae[2] = {A.m[0][dir], A.m[1][dir]};
            for (int k = 0; k < g.nv; ++k) {
                const int uk = sol.vertex_map[sol.mesh.vertex(e, k)];
                rhs[uk] -= g.measure *
                           (ae[0] * g.grad[k][0] + ae[1] * g.grad[k][1]);
            }
        }
        auto [w, rep] = cg_solve(K, rhs, 1e-10, -1, Precond::jacobi, nullptr,
                                 /*project_out_constants=*/true);
        // Normalize to zero cell average.
        double mean = 0.0;
        for (int i = 0; i < sol.n_unknowns; ++i) mean += mlump[i] * w[i];
        mean /= cell_measure;
        for (double& wi : w) wi -= mean;
        sol.corrector[dir] = std::move(w);
        sol.reports[dir] = rep;
    }
    return sol;
}

HomogenizedTensor homogenized_tensor(const CoefficientField& coeff,
                                     const CellSolution& cell) {
    HomogenizedTensor t;
    t.dim = 2;
    t.provenance = Provenance::numeric_cell_solve;
    const Mesh& mesh = cell.mesh;
    const int ne = mesh.n_elements();
    double acc[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    for (int e = 0; e < ne; ++e) {
        const ElemGeom g = elem_geom(mesh, e);
        const Mat2 A = coeff.eval_cell(g.bary);
        for (int dir = 0; dir < 2; ++dir) {
            double grad_w[2] = {0.0, 0.0};
            for (int k = 0; k < g.nv; ++k) {
                const double wk = cell.corrector_at(dir, mesh.vertex(e, k));
                grad_w[0] += wk * g.grad[k][0];
                grad_w[1] += wk * g.grad[k][1];
            }
            const double flux[2] = {
                A.m[0][0] * ((dir == 0) + grad_w[0]) +
                    A.m[0][1] * ((dir == 1) + grad_w[1]),
                A.m[1][0] * ((dir == 0) + grad_w[0]) +
                    A.m[1][1] * ((dir == 1) + grad_w[1])};
            acc[0][dir] += g.measure * flux[0];
            acc[1][dir] += g.measure * flux[1];
        }
    }
    const double cell_measure = mesh.total_measure();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) t.m.m[i][j] = acc[i][j] / cell_measure;
    return t;
}

HomogenizedTensor layered_homogenized_2d(const Profile& a11, const Profile& a12,
                                         const Profile& a21, const Profile& a22,
                                         int n_quad) {
    if (n_quad < 16)
        throw std::invalid_argument("layered_homogenized_2d: n_quad < 16");
    double inv11 = 0.0, r12 = 0.0, r21 = 0.0, schur = 0.0;
    for (int k = 0; k < n_quad; ++k) {
        const double y = (k + 0.5) / n_quad;
        const double p11 = a11(y);
        if (!(p11 > 0.0))
            throw std::invalid_argument(
                "layered_homogenized_2d: nonpositive a11 sample");
        const double p12 = a12(y), p21 = a21(y), p22 = a22(y);
        inv11 += 1.0 / p11;
        r12 += p12 / p11;
        r21 += p21 / p11;
        schur += p22 - p12 * p21 / p11;
    }
    const double w = 1.0 / n_quad;
    inv11 *= w;
    r12 *= w;
    r21 *= w;
    schur *= w;
    HomogenizedTensor t;
    t.dim = 2;
    t.provenance = Provenance::layered_2d;
    t.m.m[0][0] = 1.0 / inv11;
    t.m.m[0][1] = r12 / inv11;
    t.m.m[1][0] = r21 / inv11;
    t.m.m[1][1] = r21 * r12 / inv11 + schur;
    return t;
}

HomogenizedTensor homogenize(const CoefficientField& coeff,
                             const HomogenizeOptions& opts) {
    using Method = HomogenizeOptions::Method;
    const auto numeric = [&]() {
        const CellSolution cell = solve_cell_problems(coeff, opts.cell_n);
        return homogenized_tensor(coeff, cell);
    };
    if (opts.method == Method::numeric) {
        if (coeff.dim() != 2)
            throw std::invalid_argument(
                "homogenize: numeric cell solve requires a 2D coefficient");
        return numeric();
    }
    switch (coeff.kind()) {
        case CoefficientField::Kind::constant: {
            HomogenizedTensor t;
            t.dim = coeff.dim();
            t.m = coeff.eval_cell(0.0, 0.0);
            t.provenance = Provenance::constant;
            return t;
        }
        case CoefficientField::Kind::diagonal_profiles: {
            HomogenizedTensor t;
            t.dim = coeff.dim();
            t.provenance = Provenance::harmonic_1d;
            t.m.m[0][0] =
                harmonic_mean_1d(coeff.profile(0), opts.n_quad).m.m[0][0];
            if (coeff.dim() == 2)
                t.m.m[1][1] =
                    harmonic_mean_1d(coeff.profile(1), opts.n_quad).m.m[0][0];
            return t;
        }
        case CoefficientField::Kind::layered:
            return layered_homogenized_2d(coeff.profile(0), coeff.profile(1),
                                          coeff.profile(2), coeff.profile(3),
                                          opts.n_quad);
        case CoefficientField::Kind::tabulated: {
            if (coeff.dim() == 1) {
                // 1D tabulated media still homogenize by harmonic average.
                return harmonic_mean_1d(
                    [&coeff](double y) { return coeff.eval_cell(y).m[0][0]; },
                    opts.n_quad);
            }
            if (opts.method == Method::closed)
                throw std::invalid_argument(
                    "homogenize: no closed form for 2D tabulated media");
            return numeric();
        }
    }
    throw std::invalid_argument("homogenize: unknown coefficient kind");
}

}  // namespace cdhom
