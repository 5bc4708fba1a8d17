#pragma once

#include <string>
#include <vector>

#include "cdhom/eps_solver.hpp"
#include "cdhom/linalg.hpp"
#include "cdhom/mesh.hpp"

namespace cdhom {

// Lumped-mass discrete integral of u - v/alpha + lambda w; invariant in time
// for the continuous dynamics.
double conserved_quantity(const FieldState& state, double alpha, double lambda,
                          const Vec& m_lumped);

// Lumped-mass discrete integral of the overlap u v.
double segregation_norm(const FieldState& state, const Vec& m_lumped);

struct FrontCurve {
    double t = 0.0;
    int dim = 1;
    struct Point {
        double x1, x2;
    };
    std::vector<Point> points;  // empty when u - v never changes sign
    // Filled by estimate_front_velocities; parallel to points.
    std::vector<double> velocity;

    bool found() const { return !points.empty(); }
    double mean_x1() const;
};

// First linear-interpolated zero crossing of u - v scanning left to right.
// In 2D one crossing per horizontal grid line (centers excluded); points are
// ordered by x2.
FrontCurve front_position(const FieldState& state, const Mesh& mesh);

// Centered-difference normal velocity estimates from a recorded sequence,
// matched per x2 line. Endpoints use one-sided differences.
void estimate_front_velocities(std::vector<FrontCurve>& fronts);

// sqrt(sum m (a-b)^2).
double l2_distance(const Vec& a, const Vec& b, const Vec& m_lumped);

struct BoundsReport {
    double min_u, max_u, min_v, max_v, min_w, max_w;
    bool pass = true;
    int offending_node = -1;
    std::string offending_field;
};

// Checks 0 <= u <= u_bound, 0 <= v <= v_bound, 0 <= w <= 1 with a 1e-10
// slack for solver round-off.
BoundsReport bounds_report(const FieldState& state, double u_bound,
                           double v_bound);

}  // namespace cdhom
