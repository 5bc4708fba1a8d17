#pragma once

#include <array>
#include <functional>
#include <string>

#include "cdhom/coefficients.hpp"
#include "cdhom/fem.hpp"
#include "cdhom/linalg.hpp"
#include "cdhom/mesh.hpp"

namespace cdhom {

enum class Provenance { numeric_cell_solve, harmonic_1d, layered_2d, constant };

const char* provenance_name(Provenance p);

struct HomogenizedTensor {
    int dim = 1;
    Mat2 m;
    Provenance provenance = Provenance::constant;

    double entry(int i, int j) const { return m.m[i][j]; }
    double max_asymmetry() const { return std::abs(m.m[0][1] - m.m[1][0]); }
    // zeta^T M zeta > 0 for the canonical directions and (1,1).
    bool spd_spot_check() const;
};

// Periodic cell solutions on a criss-cross mesh of the unit cell. Correctors
// are stored per algebraic unknown after identifying opposite edges; they
// have zero cell average.
struct CellSolution {
    Mesh mesh;
    std::vector<int> vertex_map;  // mesh vertex -> periodic unknown
    int n_unknowns = 0;
    std::array<Vec, 2> corrector;
    std::array<SolveReport, 2> reports;

    double corrector_at(int dir, int vertex) const {
        return corrector[dir][vertex_map[vertex]];
    }
    // Lumped cell average of the corrector; zero up to solver tolerance.
    double corrector_mean(int dir) const;
};

// 1/ integral of 1/a over one period, midpoint rule. The classical 1D
// homogenized coefficient.
HomogenizedTensor harmonic_mean_1d(const std::function<double(double)>& a,
                                   int n_quad);
HomogenizedTensor harmonic_mean_1d(const Profile& a, int n_quad);

// Solves the two periodic cell problems
//   div_y(A(y)(e_i + grad w_i)) = 0 on the unit torus
// with P1 elements on an n x n criss-cross mesh. Requires dim == 2 and a
// symmetric coefficient (the solver is conjugate gradients; use
// layered_homogenized_2d for nonsymmetric layered media).
CellSolution solve_cell_problems(const CoefficientField& coeff, int n);

// [A_hom]_ij = integral of A(y)(e_j + grad w_j) . e_i over the cell.
HomogenizedTensor homogenized_tensor(const CoefficientField& coeff,
                                     const CellSolution& cell);

// Closed forms for media whose entries depend on y_1 only:
//   [A]11 = 1/<1/a11>          [A]12 = <a12/a11> / <1/a11>
//   [A]21 = <a21/a11> / <1/a11>
//   [A]22 = <a21/a11><a12/a11> / <1/a11> + <a22 - a12 a21 / a11>
// where <.> is the period average (midpoint rule with n_quad points).
HomogenizedTensor layered_homogenized_2d(const Profile& a11, const Profile& a12,
                                         const Profile& a21, const Profile& a22,
                                         int n_quad);

struct HomogenizeOptions {
    enum class Method { automatic, numeric, closed };
    Method method = Method::automatic;
    int cell_n = 128;
    int n_quad = 1024;
};

// Dispatch: constants pass through, 1D and per-axis diagonal profiles reduce
// to harmonic means, layered media use the closed forms, anything else runs
// the numeric cell solve.
HomogenizedTensor homogenize(const CoefficientField& coeff,
                             const HomogenizeOptions& opts = {});

}  // namespace cdhom
