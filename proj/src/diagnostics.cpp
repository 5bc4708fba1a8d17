#include "cdhom/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

namespace cdhom {

double conserved_quantity(const FieldState& state, double alpha, double lambda,
                          const Vec& m_lumped) {
    if (state.u.size() != m_lumped.size())
        throw std::invalid_argument("conserved_quantity: size mismatch");
    if (!(alpha > 0.0))
        throw std::invalid_argument("conserved_quantity: alpha must be > 0");
    double q = 0.0;
    for (std::size_t i = 0; i < m_lumped.size(); ++i)
        q += m_lumped[i] *
             (state.u[i] - state.v[i] / alpha + lambda * state.w[i]);
    return q;
}

double segregation_norm(const FieldState& state, const Vec& m_lumped) {
    if (state.u.size() != m_lumped.size())
        throw std::invalid_argument("segregation_norm: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < m_lumped.size(); ++i)
        s += m_lumped[i] * state.u[i] * state.v[i];
    return s;
}

double FrontCurve::mean_x1() const {
    if (points.empty()) return std::nan("");
    double s = 0.0;
    for (const Point& p : points) s += p.x1;
    return s / (double)points.size();
}

namespace {

// Crossing of f between consecutive scan positions; quiet NaN when none.
double scan_crossing(const std::vector<double>& xs, const std::vector<double>& fs) {
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
        const double f0 = fs[k], f1 = fs[k + 1];
        if (f0 == 0.0) return xs[k];
        if ((f0 > 0.0 && f1 < 0.0) || (f0 < 0.0 && f1 > 0.0))
            return xs[k] + (xs[k + 1] - xs[k]) * (f0 / (f0 - f1));
    }
    if (!fs.empty() && fs.back() == 0.0) return xs.back();
    return std::nan("");
}

}  // namespace

FrontCurve front_position(const FieldState& state, const Mesh& mesh) {
    if ((int)state.u.size() != mesh.n_vertices())
        throw std::invalid_argument("front_position: state/mesh size mismatch");
    FrontCurve fc;
    fc.t = state.t;
    fc.dim = mesh.dim;
    if (mesh.dim == 1) {
        const int n = mesh.n_vertices();
        std::vector<double> xs(n), fs(n);
        for (int i = 0; i < n; ++i) {
            xs[i] = mesh.x(i);
            fs[i] = state.u[i] - state.v[i];
        }
        const double c = scan_crossing(xs, fs);
        if (!std::isnan(c)) fc.points.push_back({c, 0.0});
        return fc;
    }
    const int n = mesh.grid_n;
    std::vector<double> xs(n + 1), fs(n + 1);
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            const int v = mesh.grid_vertex(i, j);
            xs[i] = mesh.x(v);
            fs[i] = state.u[v] - state.v[v];
        }
        const double c = scan_crossing(xs, fs);
        if (!std::isnan(c)) fc.points.push_back({c, (double)j / n});
    }
    return fc;
}

void estimate_front_velocities(std::vector<FrontCurve>& fronts) {
    const std::size_t m = fronts.size();
    for (std::size_t k = 0; k < m; ++k) {
        FrontCurve& f = fronts[k];
        f.velocity.assign(f.points.size(), std::nan(""));
        const FrontCurve* prev = k > 0 ? &fronts[k - 1] : nullptr;
        const FrontCurve* next = k + 1 < m ? &fronts[k + 1] : nullptr;
        for (std::size_t p = 0; p < f.points.size(); ++p) {
            const double x2 = f.points[p].x2;
            const auto find_at = [x2](const FrontCurve* c) -> const FrontCurve::Point* {
                if (!c) return nullptr;
                for (const auto& q : c->points)
                    if (q.x2 == x2) return &q;
                return nullptr;
            };
            const FrontCurve::Point* a = find_at(prev);
            const FrontCurve::Point* b = find_at(next);
            if (a && b && fronts[k + 1].t > fronts[k - 1].t) {
                f.velocity[p] = (b->x1 - a->x1) / (fronts[k + 1].t - fronts[k - 1].t);
            } else if (a && fronts[k].t > fronts[k - 1].t) {
                f.velocity[p] = (f.points[p].x1 - a->x1) / (fronts[k].t - fronts[k - 1].t);
            } else if (b && fronts[k + 1].t > fronts[k].t) {
                f.velocity[p] = (b->x1 - f.points[p].x1) / (fronts[k + 1].t - fronts[k].t);
            }
        }
    }
}

double l2_distance(const Vec& a, const Vec& b, const Vec& m_lumped) {
    if (a.size() != b.size() || a.size() != m_lumped.size())
        throw std::invalid_argument("l2_distance: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += m_lumped[i] * d * d;
    }
    return std::sqrt(s);
}

BoundsReport bounds_report(const FieldState& state, double u_bound,
                           double v_bound) {
    constexpr double kSlack = 1e-10;
    BoundsReport rep;
    const auto scan = [&](const Vec& f, double lo, double hi, double& fmin,
                          double& fmax, const char* name) {
        fmin = f[0];
        fmax = f[0];
        for (std::size_t i = 0; i < f.size(); ++i) {
            fmin = std::min(fmin, f[i]);
            fmax = std::max(fmax, f[i]);
            if (rep.pass && (f[i] < lo - kSlack || f[i] > hi + kSlack)) {
                rep.pass = false;
                rep.offending_node = (int)i;
                rep.offending_field = name;
            }
        }
    };
    scan(state.u, 0.0, u_bound, rep.min_u, rep.max_u, "u");
    scan(state.v, 0.0, v_bound, rep.min_v, rep.max_v, "v");
    scan(state.w, 0.0, 1.0, rep.min_w, rep.max_w, "w");
    return rep;
}

}  // namespace cdhom
