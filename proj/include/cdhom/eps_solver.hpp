#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdhom/coefficients.hpp"
#include "cdhom/fem.hpp"
#include "cdhom/linalg.hpp"
#include "cdhom/mesh.hpp"

namespace cdhom {

struct SimParams {
    double eps = 1e-3;
    // Competition scale; defaults to eps when unset.
    std::optional<double> delta;
    double alpha = 1.0;
    double lambda = 0.0;
    double r = 0.0;
    double tau = 1e-3;
    double t_end = 1.0;
    bool mass_lumping = true;

    double effective_delta() const { return delta ? *delta : eps; }
    void validate() const;
};

struct FieldState {
    double t = 0.0;
    Vec u, v, w;
};

struct InitSpec {
    enum class Kind { step_1d, sine_front_2d, uniform, file };
    Kind kind = Kind::step_1d;
    double threshold = 0.5;
    double amplitude = 0.1;
    double cu = 0.0, cv = 0.0, cw = 0.0;
    std::string path;

    static InitSpec step_1d(double threshold);
    static InitSpec sine_front_2d(double amplitude, double threshold);
    static InitSpec uniform(double cu, double cv, double cw);
    static InitSpec from_file(std::string path);
};

// step_1d: u = 1 on {x < threshold}, v = 1 on the complement, w = u.
// sine_front_2d: the same split across x1 + amplitude*sin(2 pi x2) < threshold.
// file: one "u v w" line per vertex.
FieldState set_initial_data(const Mesh& mesh, const InitSpec& spec);

struct Operators {
    SparseMatrix M;  // consistent mass, or diagonal lumped mass when lumped
    Vec m_lumped;    // always populated (reaction terms, diagnostics)
    SparseMatrix K_A, K_B;
    bool lumped = true;
    double h_max = 0.0;
};

// Mass and the two stiffness matrices with coefficients sampled at element
// barycenters, A(x/eps). Warns on stderr when h > eps/8.
Operators assemble_operators(const Mesh& mesh, const CoefficientField& A,
                             const CoefficientField& B, double eps,
                             bool lumping);

// The implicit reaction diagonal would cross zero: the step is rejected and
// the caller should reduce tau.
struct ReduceTimestepError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One IMEX Euler step: diffusion and the linear-in-unknown reaction part
// implicit with coefficients lagged at the previous state, then the closed
// form w update
//   w^l = (w + (tau/delta) u) / (1 + (tau/delta)(u + v)).
FieldState imex_step(const FieldState& state, const SimParams& params,
                     const Operators& ops);

struct DiagnosticsRow {
    double t, Q, min_u, max_u, min_v, max_v, min_w, max_w, seg;
};

struct Trajectory {
    std::vector<FieldState> recorded;
    std::vector<DiagnosticsRow> diagnostics;
    // Riemann sum of the segregation norm over every step, tau * sum m u v.
    double seg_time_integral = 0.0;
    double u_bound = 0.0, v_bound = 0.0;
};

// Steps from t = 0 to t_end recording at t = 0, every record_interval and
// t_end. record_interval <= 0 records endpoints only. on_record, when given,
// sees every recorded state.
Trajectory run_simulation(const Mesh& mesh, const CoefficientField& A,
                          const CoefficientField& B, const SimParams& params,
                          const FieldState& init, double record_interval = 0.1,
                          const std::function<void(const FieldState&)>& on_record = {});

Trajectory run_simulation(const Mesh& mesh, const CoefficientField& A,
                          const CoefficientField& B, const SimParams& params,
                          const InitSpec& init, double record_interval = 0.1,
                          const std::function<void(const FieldState&)>& on_record = {});

}  // namespace cdhom
