#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cdhom/scenario.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitSolverError = 3;

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "scenario configuration file")
        ->required();
    cmd->add_option("--set", args.overrides,
                    "override a config entry, section.key=value");
}

int run_mode(const CommonArgs& args, cdhom::Mode mode) {
    cdhom::ScenarioConfig cfg;
    try {
        cfg = cdhom::ScenarioConfig::parse_file(args.config_path, args.overrides);
        cfg.mode = mode;
        cfg.validate();
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    }
    try {
        cdhom::run_scenario(cfg);
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return kExitSolverError;
    }
    return 0;
}

// Recomputes front curves from snapshot files written by simulate/stefan.
int run_front(const CommonArgs& args, const std::vector<std::string>& snapshots,
              const std::string& out_path) {
    cdhom::ScenarioConfig cfg;
    try {
        cfg = cdhom::ScenarioConfig::parse_file(args.config_path, args.overrides);
        cfg.validate();
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    }
    try {
        const cdhom::Mesh mesh = cfg.make_mesh();
        std::vector<cdhom::FrontCurve> fronts;
        for (const std::string& path : snapshots) {
            std::ifstream in(path);
            if (!in) throw std::runtime_error("cannot open snapshot '" + path + "'");
            std::string hash, teq;
            in >> hash >> teq;
            if (hash != "#" || teq.rfind("t=", 0) != 0)
                throw std::runtime_error("snapshot '" + path + "' lacks '# t=' header");
            cdhom::FieldState st;
            st.t = std::stod(teq.substr(2));
            const int n = mesh.n_vertices();
            st.u.resize(n);
            st.v.resize(n);
            st.w.resize(n);
            // Columns: x [y] u v w, or x [y] Z u v w for enthalpy snapshots.
            std::vector<double> row;
            std::string line;
            std::getline(in, line);  // rest of header line
            int i = 0;
            while (i < n && std::getline(in, line)) {
                if (line.empty()) continue;
                row.clear();
                std::size_t pos = 0;
                while (pos < line.size()) {
                    std::size_t next = 0;
                    row.push_back(std::stod(line.substr(pos), &next));
                    pos += next;
                    while (pos < line.size() && line[pos] == ' ') ++pos;
                }
                const std::size_t base = (std::size_t)mesh.dim;
                if (row.size() < base + 3)
                    throw std::runtime_error("snapshot '" + path + "' has short rows");
                const std::size_t off = row.size() - 3;  // skip coords (+ Z)
                st.u[i] = row[off];
                st.v[i] = row[off + 1];
                st.w[i] = row[off + 2];
                ++i;
            }
            if (i != n)
                throw std::runtime_error("snapshot '" + path +
                                         "' does not match the configured mesh");
            fronts.push_back(cdhom::front_position(st, mesh));
        }
        cdhom::estimate_front_velocities(fronts);
        cdhom::write_front_csv(out_path, fronts);
        std::cout << "summary: " << fronts.size() << " snapshots -> " << out_path
                  << '\n';
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return kExitSolverError;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "cdhom: two-species competition-diffusion systems with oscillating "
        "coefficients, periodic homogenization and the limiting two-phase "
        "free boundary problem"};
    app.require_subcommand(1);

    CommonArgs cell_args, sim_args, stefan_args, compare_args, sweep_args,
        front_args;
    std::vector<std::string> front_snapshots;
    std::string front_out = "front.csv";

    CLI::App* cell = app.add_subcommand("cell", "homogenized diffusion tensors");
    add_common(cell, cell_args);
    CLI::App* sim =
        app.add_subcommand("simulate", "run the two-species oscillatory system");
    add_common(sim, sim_args);
    CLI::App* stefan =
        app.add_subcommand("stefan", "run the limiting enthalpy problem");
    add_common(stefan, stefan_args);
    CLI::App* compare = app.add_subcommand(
        "compare", "run both solvers and tabulate L2 distances");
    add_common(compare, compare_args);
    CLI::App* sweep =
        app.add_subcommand("sweep", "repeat the run over a list of eps values");
    add_common(sweep, sweep_args);
    CLI::App* front = app.add_subcommand(
        "front", "recompute front curves from snapshot files");
    add_common(front, front_args);
    front->add_option("snapshots", front_snapshots, "snapshot files, time order")
        ->required();
    front->add_option("--out", front_out, "output CSV path");

    CLI11_PARSE(app, argc, argv);

    if (cell->parsed()) return run_mode(cell_args, cdhom::Mode::cell);
    if (sim->parsed()) return run_mode(sim_args, cdhom::Mode::eps);
    if (stefan->parsed()) return run_mode(stefan_args, cdhom::Mode::stefan);
    if (compare->parsed()) return run_mode(compare_args, cdhom::Mode::compare);
    if (sweep->parsed()) return run_mode(sweep_args, cdhom::Mode::sweep);
    if (front->parsed()) return run_front(front_args, front_snapshots, front_out);
    return kExitConfigError;
}
