#pragma once

#include <array>
#include <vector>

#include "chb/mesh.hpp"
#include "chb/parallel.hpp"
#include "chb/state.hpp"

namespace chb {

// Voigt vectors use engineering shear: (e11, e22, 2*e12).
using Voigt = std::array<double, 3>;
using VoigtMatrix = std::array<std::array<double, 3>, 3>;

Voigt voigt_apply(const VoigtMatrix& C, const Voigt& v);
double voigt_dot(const Voigt& a, const Voigt& b);

struct MaterialParams {
  double gamma = 1.0;      // interface energy scale
  double ell = 0.025;      // interface width
  double mobility = 1.0;   // m
  double kappa = 0.25;     // permeability
  double xi = 0.5;         // eigenstrain magnitude, T(phi) = xi * phi * I
  double beta_cut = 1.5;   // quadratic continuation point of the double well
  double M_minus = 1.0, M_plus = 0.1;
  double alpha_minus = 1.0, alpha_plus = 0.1;
  VoigtMatrix C_minus{{{100.0, 20.0, 0.0}, {20.0, 100.0, 0.0}, {0.0, 0.0, 100.0}}};
  VoigtMatrix C_plus{{{1.0, 0.1, 0.0}, {0.1, 1.0, 0.0}, {0.0, 0.0, 1.0}}};

  static MaterialParams defaults() { return MaterialParams{}; }
  void validate() const;  // throws std::invalid_argument
};

// Nodal source fields: reaction R, fluid source S_f, body force f.
struct SourceData {
  std::vector<double> R, S_f, f_x, f_y;
  static SourceData zero(const Mesh& mesh);
};

// Modified double well: quartic core on (-beta, beta), quadratic growth
// outside, split into a convex part psi_c and the expansive part psi_e with
// psi = psi_c - psi_e. psi_c' is Lipschitz with constant 4*beta^2.
double psi(double phi, double beta);
double psi_c(double phi, double beta);
double psi_e(double phi);
double psi_prime(double phi, double beta);
double psi_c_prime(double phi, double beta);
double psi_c_second(double phi, double beta);
double psi_e_prime(double phi);
double psi_c_lipschitz(double beta);

// C^1 ramp from 0 at phi <= -1 to 1 at phi >= 1.
double interp_pi(double phi);
double interp_pi_prime(double phi);
double interp_pi_second(double phi);

struct MaterialEval {
  double M = 0.0, alpha = 0.0;
  VoigtMatrix C{};
};
MaterialEval material_eval(const MaterialParams& p, double phi);
MaterialEval material_eval_prime(const MaterialParams& p, double phi);
MaterialEval material_eval_second(const MaterialParams& p, double phi);

struct EnergyBreakdown {
  double total = 0.0, interface = 0.0, elastic = 0.0, fluid = 0.0;
};

// Free energy E = E_interface + E_elastic + E_fluid of a state, with every
// parameter evaluated at the state's own phi. Quadrature matches the scheme:
// nodal rule for the double well and the parameter-weighted densities, exact
// integration for the gradient term.
EnergyBreakdown free_energy(const Mesh& mesh, const State& s,
                            const MaterialParams& p,
                            Exec exec = default_exec());

}  // namespace chb
