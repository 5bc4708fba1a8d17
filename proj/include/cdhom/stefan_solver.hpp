#pragma once

#include "cdhom/cell_homog.hpp"
#include "cdhom/eps_solver.hpp"
#include "cdhom/linalg.hpp"
#include "cdhom/mesh.hpp"

namespace cdhom {

// Two-phase enthalpy formulation of the limiting free boundary problem:
//   d/dt Z - div(D(phi(Z)) grad phi(Z)) = 0,  no-flux boundary.
struct EnthalpyModel {
    double lambda = 0.0;
    HomogenizedTensor A_hom;  // phase phi(Z) > 0
    HomogenizedTensor B_hom;  // phase phi(Z) < 0
    double sigma_reg = 1e-3;  // plateau slope of the regularized phi

    void validate(int dim) const;
};

struct EnthalpyState {
    double t = 0.0;
    Vec Z;
};

struct StefanFields {
    Vec u_star, v_star, w_star;
};

// phi(s) = s for s < 0, 0 on [0, lambda], s - lambda beyond.
double phi(double s, double lambda);
// Continuous piecewise-linear regularization with plateau slope sigma;
// coincides with phi when lambda = 0.
double phi_reg(double s, double lambda, double sigma);
double phi_reg_slope(double s, double lambda, double sigma);

// A_hom for s > 0, B_hom for s < 0, the average at exactly 0.
Mat2 diffusion_select(double s, const EnthalpyModel& model);

// One semi-implicit step: the phase selector is frozen element-wise at
// phi(Z^{l-1}) (barycenter values), then Newton solves
//   M (Z - Z_prev)/tau + K_D phi_reg(Z) = 0
// with lumped mass, tolerance 1e-10 and at most 50 iterations. Each Newton
// update solves an SPD system in the flux variable, so conjugate gradients
// applies throughout.
EnthalpyState stefan_step(const EnthalpyState& state, const EnthalpyModel& model,
                          const Mesh& mesh, double tau);

// u* = max(phi(Z), 0), v* = alpha * max(-phi(Z), 0); w* fills the latent
// plateau: clamp((Z - phi(Z))/lambda, 0, 1) for lambda > 0, else the
// indicator of Z > 0.
StefanFields recover_fields(const EnthalpyState& state,
                            const EnthalpyModel& model, double alpha);

// Z = u - v/alpha + lambda w, nodewise.
Vec initial_enthalpy(const FieldState& init, double alpha, double lambda);

}  // namespace cdhom
