#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "cdhom/config.hpp"
#include "cdhom/diagnostics.hpp"
#include "cdhom/stefan_solver.hpp"

namespace cdhom {

struct ScenarioResult {
    double final_Q = 0.0;
    bool bounds_pass = true;
    // Mean front x1 at t_end; unset when the front left the domain.
    std::optional<double> final_front;
    std::string summary;
};

// Executes the configured mode, writing snapshots, diagnostics, front and
// sweep CSV files under output.dir and printing a one-line summary.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

struct SweepRow {
    double eps = 0.0;
    double front_end = std::nan("");
    double seg_total = std::nan("");
    double l2_to_stefan = std::nan("");
    bool ok = false;
    std::string error;
};

// Repeats the eps run of `base` over the descending eps values, holding the
// other parameters fixed (delta follows eps unless the config pins it), and
// compares each run against one shared homogenized-limit solution. Failed
// rows are recorded and the sweep continues.
std::vector<SweepRow> eps_sweep(const ScenarioConfig& base,
                                const std::vector<double>& eps_list);

// Stefan trajectory on the eps recording schedule.
struct StefanTrajectory {
    std::vector<EnthalpyState> recorded;
    EnthalpyModel model;
};

StefanTrajectory run_stefan(const Mesh& mesh, const EnthalpyModel& model,
                            const Vec& Z0, double tau, double t_end,
                            double record_interval);

// Shared file writers (formats documented in the README).
void write_snapshot(const std::string& path, const Mesh& mesh,
                    const FieldState& state);
void write_stefan_snapshot(const std::string& path, const Mesh& mesh,
                           const EnthalpyState& state, const StefanFields& f);
void write_diagnostics_csv(const std::string& path,
                           const std::vector<DiagnosticsRow>& rows);
void write_front_csv(const std::string& path,
                     const std::vector<FrontCurve>& fronts);
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

// Time label used in snapshot filenames: snap_t<label>.txt.
std::string time_label(double t);

}  // namespace cdhom
