#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cdhom/cell_homog.hpp"
#include "cdhom/coefficients.hpp"
#include "cdhom/eps_solver.hpp"

namespace cdhom {

struct ConfigError : std::runtime_error {
    int line;  // 0 when no single line applies (overrides, validation)
    ConfigError(const std::string& what, int line_no = 0)
        : std::runtime_error(line_no > 0 ? what + " (line " +
                                               std::to_string(line_no) + ")"
                                         : what),
          line(line_no) {}
};

enum class Mode { cell, eps, stefan, compare, sweep };

struct MeshSpec {
    int dim = 1;
    int n = 0;        // cells in 1D, grid squares per side in 2D
    double a = 0.0;   // 1D endpoints
    double b = 1.0;
};

struct OutputSpec {
    std::string dir = "out";
    double record_interval = 0.1;
};

struct CellSpec {
    int n = 128;
    int n_quad = 1024;
    HomogenizeOptions::Method method = HomogenizeOptions::Method::automatic;
    HomogenizeOptions options() const { return {method, n, n_quad}; }
};

struct StefanSpec {
    double sigma_reg = 1e-3;
};

// Flat key=value scenario file with [section] headers, '#' comments and
// hard errors on unknown keys. Coefficient values are expressions:
//   constant(c) | constant(a11,a12,a21,a22) | sin1d(mean, amplitude)
//   | diag(p1, p2) | layered(p11, p12, p21, p22) | tabulated(path)
// with profile arguments constant(c) | sin1d(mean, amplitude) | pwc(v0,...).
struct ScenarioConfig {
    Mode mode = Mode::eps;
    MeshSpec mesh;
    std::string coeff_a = "constant(1)";
    std::string coeff_b = "constant(1)";
    SimParams params;
    InitSpec initial;
    OutputSpec output;
    CellSpec cell;
    StefanSpec stefan;
    std::vector<double> eps_list;

    // overrides: "section.key=value" entries applied after the file.
    static ScenarioConfig parse_file(const std::string& path,
                                     const std::vector<std::string>& overrides = {});
    static ScenarioConfig parse_text(const std::string& text,
                                     const std::vector<std::string>& overrides = {});

    void validate() const;
    CoefficientField make_coeff_a() const;
    CoefficientField make_coeff_b() const;
    Mesh make_mesh() const;
};

// Expression parsers shared with the config file syntax.
Profile make_profile(const std::string& expr);
CoefficientField make_coefficient(const std::string& expr, int dim);

}  // namespace cdhom
