#pragma once

#include <string>

#include "chb/physics.hpp"
#include "chb/solvers.hpp"

namespace chb {

// Parsed flat key = value configuration. Sources are spatially constant in
// the config format; make_sources expands them on a mesh.
struct ParsedConfig {
  MaterialParams params;
  SolverConfig solver;
  int mesh_n = 64;
  double R_const = 0.0;
  double Sf_const = 0.0;
  double f_x_const = 0.0;
  double f_y_const = 0.0;
};

// Accepts '#' comments and blank lines. Unknown keys, malformed values and
// invariant violations raise ParseError with the 1-based line number.
// Recognized keys: gamma, ell, mobility, kappa, xi, beta, M_minus, M_plus,
// alpha_minus, alpha_plus, C_minus, C_plus (six upper-triangle entries
// 11 12 13 22 23 33), tau, n, n_steps, tol, max_iter, newton_tol,
// newton_max, R, S_f, f_x, f_y.
ParsedConfig parse_config(const std::string& text);
ParsedConfig parse_config_file(const std::string& path);

SourceData make_sources(const Mesh& mesh, const ParsedConfig& cfg);

}  // namespace chb
