#pragma once

#include <functional>

#include "cdhom/coefficients.hpp"
#include "cdhom/linalg.hpp"
#include "cdhom/mesh.hpp"

namespace cdhom {

// Per-element P1 data: measure, constant shape-function gradients and the
// barycenter. Only the first `nv` rows of grad are meaningful.
struct ElemGeom {
    int nv = 2;
    double measure = 0.0;
    double grad[3][2] = {};
    double bary[2] = {};
};

ElemGeom elem_geom(const Mesh& mesh, int e);

using ElemCoeffFn = std::function<Mat2(int elem, const double* barycenter)>;

// Stiffness matrix of the bilinear form (A grad u, grad v) with one-point
// (barycenter) coefficient quadrature. vmap, when given, maps mesh vertices
// onto n_unknowns algebraic unknowns (periodic identification).
SparseMatrix assemble_stiffness(const Mesh& mesh, const ElemCoeffFn& coeff,
                                const std::vector<int>* vmap = nullptr,
                                int n_unknowns = -1);

// Row-sum lumped P1 mass: measure/nv credited to each element vertex.
Vec assemble_lumped_mass(const Mesh& mesh, const std::vector<int>* vmap = nullptr,
                         int n_unknowns = -1);

SparseMatrix assemble_consistent_mass(const Mesh& mesh);

double max_element_diameter(const Mesh& mesh);

}  // namespace cdhom
