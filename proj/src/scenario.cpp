#include "cdhom/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace cdhom {

std::string time_label(double t) {
    const double r = std::round(t * 1e9) / 1e9;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", r);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out.precision(17);
    return out;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory '" + dir + "'");
}

}  // namespace

void write_snapshot(const std::string& path, const Mesh& mesh,
                    const FieldState& state) {
    auto out = open_out(path);
    out << "# t=" << time_label(state.t) << '\n';
    for (int i = 0; i < mesh.n_vertices(); ++i) {
        out << mesh.x(i);
        if (mesh.dim == 2) out << ' ' << mesh.y(i);
        out << ' ' << state.u[i] << ' ' << state.v[i] << ' ' << state.w[i]
            << '\n';
    }
}

void write_stefan_snapshot(const std::string& path, const Mesh& mesh,
                           const EnthalpyState& state, const StefanFields& f) {
    auto out = open_out(path);
    out << "# t=" << time_label(state.t) << '\n';
    for (int i = 0; i < mesh.n_vertices(); ++i) {
        out << mesh.x(i);
        if (mesh.dim == 2) out << ' ' << mesh.y(i);
        out << ' ' << state.Z[i] << ' ' << f.u_star[i] << ' ' << f.v_star[i]
            << ' ' << f.w_star[i] << '\n';
    }
}

void write_diagnostics_csv(const std::string& path,
                           const std::vector<DiagnosticsRow>& rows) {
    auto out = open_out(path);
    out << "t,Q,min_u,max_u,min_v,max_v,min_w,max_w,seg\n";
    for (const auto& r : rows)
        out << r.t << ',' << r.Q << ',' << r.min_u << ',' << r.max_u << ','
            << r.min_v << ',' << r.max_v << ',' << r.min_w << ',' << r.max_w
            << ',' << r.seg << '\n';
}

void write_front_csv(const std::string& path,
                     const std::vector<FrontCurve>& fronts) {
    auto out = open_out(path);
    out << "t,x2,front_x1\n";
    for (const auto& fc : fronts)
        for (const auto& p : fc.points)
            out << fc.t << ',' << p.x2 << ',' << p.x1 << '\n';
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
    auto out = open_out(path);
    out << "eps,front_end,seg_total,l2_to_stefan\n";
    for (const auto& r : rows)
        out << r.eps << ',' << r.front_end << ',' << r.seg_total << ','
            << r.l2_to_stefan << '\n';
}

StefanTrajectory run_stefan(const Mesh& mesh, const EnthalpyModel& model,
                            const Vec& Z0, double tau, double t_end,
                            double record_interval) {
    model.validate(mesh.dim);
    if (!(tau > 0.0) || !(t_end >= tau))
        throw std::invalid_argument("run_stefan: needs tau > 0 and t_end >= tau");
    StefanTrajectory traj;
    traj.model = model;
    EnthalpyState state;
    state.t = 0.0;
    state.Z = Z0;
    traj.recorded.push_back(state);
    const long n_steps = (long)std::ceil(t_end / tau - 1e-9);
    double next_mark = record_interval > 0.0 ? record_interval : t_end + 1.0;
    for (long l = 1; l <= n_steps; ++l) {
        state = stefan_step(state, model, mesh, tau);
        state.t = (double)l * tau;
        const bool at_mark = state.t >= next_mark - 1e-12;
        if (at_mark || l == n_steps) {
            traj.recorded.push_back(state);
            while (next_mark <= state.t + 1e-12) next_mark += record_interval;
        }
    }
    return traj;
}

namespace {

FieldState stefan_as_field_state(const EnthalpyState& st, const StefanFields& f) {
    FieldState fs;
    fs.t = st.t;
    fs.u = f.u_star;
    fs.v = f.v_star;
    fs.w = f.w_star;
    return fs;
}

EnthalpyModel model_from_config(const ScenarioConfig& cfg) {
    EnthalpyModel model;
    model.lambda = cfg.params.lambda;
    model.sigma_reg = cfg.stefan.sigma_reg;
    const HomogenizeOptions opts = cfg.cell.options();
    model.A_hom = homogenize(cfg.make_coeff_a(), opts);
    model.B_hom = homogenize(cfg.make_coeff_b(), opts);
    return model;
}

std::optional<double> front_scalar(const FrontCurve& fc) {
    if (!fc.found()) return std::nullopt;
    return fc.dim == 1 ? fc.points[0].x1 : fc.mean_x1();
}

ScenarioResult run_eps_mode(const ScenarioConfig& cfg) {
    const Mesh mesh = cfg.make_mesh();
    const CoefficientField A = cfg.make_coeff_a();
    const CoefficientField B = cfg.make_coeff_b();
    ensure_dir(cfg.output.dir);
    const Trajectory traj = run_simulation(
        mesh, A, B, cfg.params, cfg.initial, cfg.output.record_interval);

    std::vector<FrontCurve> fronts;
    bool bounds_ok = true;
    for (const FieldState& st : traj.recorded) {
        write_snapshot(cfg.output.dir + "/snap_t" + time_label(st.t) + ".txt",
                       mesh, st);
        fronts.push_back(front_position(st, mesh));
        if (!bounds_report(st, traj.u_bound, traj.v_bound).pass)
            bounds_ok = false;
    }
    estimate_front_velocities(fronts);
    write_diagnostics_csv(cfg.output.dir + "/diagnostics.csv", traj.diagnostics);
    write_front_csv(cfg.output.dir + "/front.csv", fronts);

    ScenarioResult res;
    res.final_Q = traj.diagnostics.back().Q;
    res.bounds_pass = bounds_ok;
    res.final_front = front_scalar(fronts.back());
    char fbuf[40] = "none";
    if (res.final_front) std::snprintf(fbuf, sizeof fbuf, "%.12g", *res.final_front);
    char buf[160];
    std::snprintf(buf, sizeof buf, "summary: Q_end=%.12g bounds=%s front_end=%s",
                  res.final_Q, bounds_ok ? "pass" : "fail", fbuf);
    res.summary = buf;
    return res;
}

ScenarioResult run_stefan_mode(const ScenarioConfig& cfg) {
    const Mesh mesh = cfg.make_mesh();
    const EnthalpyModel model = model_from_config(cfg);
    ensure_dir(cfg.output.dir);
    const FieldState init = set_initial_data(mesh, cfg.initial);
    const Vec Z0 = initial_enthalpy(init, cfg.params.alpha, cfg.params.lambda);
    const StefanTrajectory traj =
        run_stefan(mesh, model, Z0, cfg.params.tau, cfg.params.t_end,
                   cfg.output.record_interval);

    const Vec mlump = assemble_lumped_mass(mesh);
    std::vector<FrontCurve> fronts;
    std::vector<DiagnosticsRow> diag;
    for (const EnthalpyState& st : traj.recorded) {
        const StefanFields f = recover_fields(st, model, cfg.params.alpha);
        write_stefan_snapshot(
            cfg.output.dir + "/snap_t" + time_label(st.t) + ".txt", mesh, st, f);
        const FieldState fs = stefan_as_field_state(st, f);
        fronts.push_back(front_position(fs, mesh));
        DiagnosticsRow row;
        row.t = st.t;
        row.Q = conserved_quantity(fs, cfg.params.alpha, cfg.params.lambda, mlump);
        row.seg = segregation_norm(fs, mlump);
        const auto mm = [](const Vec& f2, double& lo, double& hi) {
            lo = hi = f2[0];
            for (double x : f2) {
                lo = std::min(lo, x);
                hi = std::max(hi, x);
            }
        };
        mm(fs.u, row.min_u, row.max_u);
        mm(fs.v, row.min_v, row.max_v);
        mm(fs.w, row.min_w, row.max_w);
        diag.push_back(row);
    }
    estimate_front_velocities(fronts);
    write_diagnostics_csv(cfg.output.dir + "/diagnostics.csv", diag);
    write_front_csv(cfg.output.dir + "/front.csv", fronts);

    ScenarioResult res;
    res.final_Q = diag.back().Q;
    res.bounds_pass = true;
    res.final_front = front_scalar(fronts.back());
    char fbuf[40] = "none";
    if (res.final_front) std::snprintf(fbuf, sizeof fbuf, "%.12g", *res.final_front);
    char buf[160];
    std::snprintf(buf, sizeof buf, "summary: Q_end=%.12g bounds=pass front_end=%s",
                  res.final_Q, fbuf);
    res.summary = buf;
    return res;
}

ScenarioResult run_compare_mode(const ScenarioConfig& cfg) {
    const Mesh mesh = cfg.make_mesh();
    const CoefficientField A = cfg.make_coeff_a();
    const CoefficientField B = cfg.make_coeff_b();
    const EnthalpyModel model = model_from_config(cfg);
    ensure_dir(cfg.output.dir);

    const FieldState init = set_initial_data(mesh, cfg.initial);
    const Trajectory eps_traj = run_simulation(mesh, A, B, cfg.params, init,
                                               cfg.output.record_interval);
    const Vec Z0 = initial_enthalpy(init, cfg.params.alpha, cfg.params.lambda);
    const StefanTrajectory ste_traj =
        run_stefan(mesh, model, Z0, cfg.params.tau, cfg.params.t_end,
                   cfg.output.record_interval);
    if (eps_traj.recorded.size() != ste_traj.recorded.size())
        throw std::runtime_error("compare: recording schedules diverged");

    const Vec mlump = assemble_lumped_mass(mesh);
    auto out = open_out(cfg.output.dir + "/compare.csv");
    out << "t,l2_u,l2_v,l2_uv\n";
    double last = 0.0;
    for (std::size_t k = 0; k < eps_traj.recorded.size(); ++k) {
        const FieldState& fs = eps_traj.recorded[k];
        const EnthalpyState& es = ste_traj.recorded[k];
        if (std::abs(fs.t - es.t) > 1e-9)
            throw std::runtime_error("compare: recorded times diverged");
        const StefanFields f = recover_fields(es, model, cfg.params.alpha);
        const double du = l2_distance(fs.u, f.u_star, mlump);
        const double dv = l2_distance(fs.v, f.v_star, mlump);
        last = std::sqrt(du * du + dv * dv);
        out << fs.t << ',' << du << ',' << dv << ',' << last << '\n';
    }

    ScenarioResult res;
    res.final_Q = eps_traj.diagnostics.back().Q;
    res.bounds_pass = true;
    char buf[160];
    std::snprintf(buf, sizeof buf, "summary: l2_uv_end=%.12g over %zu shared times",
                  last, eps_traj.recorded.size());
    res.summary = buf;
    return res;
}

ScenarioResult run_sweep_mode(const ScenarioConfig& cfg) {
    ensure_dir(cfg.output.dir);
    const std::vector<SweepRow> rows = eps_sweep(cfg, cfg.eps_list);
    write_sweep_csv(cfg.output.dir + "/sweep.csv", rows);
    ScenarioResult res;
    int failed = 0;
    for (const auto& r : rows)
        if (!r.ok) ++failed;
    char buf[160];
    std::snprintf(buf, sizeof buf, "summary: sweep of %zu eps values, %d failed",
                  rows.size(), failed);
    res.summary = buf;
    return res;
}

void print_tensor(std::ostream& os, const char* name,
                  const HomogenizedTensor& t) {
    os << name << ":\n";
    os.precision(17);
    if (t.dim == 1) {
        os << t.m.m[0][0] << '\n';
    } else {
        os << t.m.m[0][0] << ' ' << t.m.m[0][1] << '\n'
           << t.m.m[1][0] << ' ' << t.m.m[1][1] << '\n';
    }
    os << "provenance: " << provenance_name(t.provenance) << '\n';
}

ScenarioResult run_cell_mode(const ScenarioConfig& cfg) {
    const HomogenizeOptions opts = cfg.cell.options();
    const HomogenizedTensor ta = homogenize(cfg.make_coeff_a(), opts);
    const HomogenizedTensor tb = homogenize(cfg.make_coeff_b(), opts);
    print_tensor(std::cout, "A_hom", ta);
    print_tensor(std::cout, "B_hom", tb);
    ScenarioResult res;
    res.summary = "summary: homogenized tensors printed";
    return res;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    ScenarioResult res;
    switch (cfg.mode) {
        case Mode::cell: res = run_cell_mode(cfg); break;
        case Mode::eps: res = run_eps_mode(cfg); break;
        case Mode::stefan: res = run_stefan_mode(cfg); break;
        case Mode::compare: res = run_compare_mode(cfg); break;
        case Mode::sweep: res = run_sweep_mode(cfg); break;
    }
    std::cout << res.summary << '\n';
    return res;
}

std::vector<SweepRow> eps_sweep(const ScenarioConfig& base,
                                const std::vector<double>& eps_list) {
    if (eps_list.empty())
        throw std::invalid_argument("eps_sweep: empty eps list");
    for (std::size_t i = 0; i + 1 < eps_list.size(); ++i)
        if (!(eps_list[i] > eps_list[i + 1]))
            throw std::invalid_argument("eps_sweep: eps list must be descending");

    const Mesh mesh = base.make_mesh();
    const CoefficientField A = base.make_coeff_a();
    const CoefficientField B = base.make_coeff_b();
    const FieldState init = set_initial_data(mesh, base.initial);
    const Vec mlump = assemble_lumped_mass(mesh);

    // One shared homogenized-limit reference at t_end.
    const EnthalpyModel model = model_from_config(base);
    const Vec Z0 = initial_enthalpy(init, base.params.alpha, base.params.lambda);
    const StefanTrajectory ref =
        run_stefan(mesh, model, Z0, base.params.tau, base.params.t_end,
                   /*record_interval=*/0.0);
    const StefanFields ref_fields =
        recover_fields(ref.recorded.back(), model, base.params.alpha);

    std::vector<SweepRow> rows;
    for (double eps : eps_list) {
        SweepRow row;
        row.eps = eps;
        try {
            SimParams p = base.params;
            p.eps = eps;  // delta follows eps unless the config pinned it
            const Trajectory traj =
                run_simulation(mesh, A, B, p, init, /*record_interval=*/0.0);
            const FieldState& last = traj.recorded.back();
            const auto front = front_scalar(front_position(last, mesh));
            row.front_end = front ? *front : std::nan("");
            row.seg_total = traj.seg_time_integral;
            const double du = l2_distance(last.u, ref_fields.u_star, mlump);
            const double dv = l2_distance(last.v, ref_fields.v_star, mlump);
            row.l2_to_stefan = std::sqrt(du * du + dv * dv);
            row.ok = true;
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
            std::cerr << "sweep: eps=" << eps << " failed: " << e.what() << '\n';
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace cdhom
