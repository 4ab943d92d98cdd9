#pragma once

#include <span>
#include <vector>

#include "chb/mesh.hpp"
#include "chb/physics.hpp"
#include "chb/solvers.hpp"

namespace chb {

// Constants entering the theoretical contraction bounds.
struct ConvergenceConstants {
  double C_inv = 0.0;     // inverse-inequality constant at unit coefficient
  double C_Omega = 0.0;   // Poincare-Wirtinger constant
  double c_C = 0.0, C_C = 0.0;          // stiffness spectral bounds
  double c_T = 0.0, C_T = 0.0;          // eigenstrain bounds
  double c_M = 0.0, C_M = 0.0;          // Biot modulus bounds
  double c_alpha = 0.0, C_alpha = 0.0;  // Biot-Willis bounds
  double L_psi_c = 0.0;                 // double-well derivative Lipschitz bound

  // Throws DomainError on nonpositive entries, c > C, or C_alpha > 1.
  void validate() const;
};

// Sharp discrete inverse-inequality constant: h * sqrt(lambda_max) of the
// generalized eigenproblem K_y v = lambda Mc v (dense solve; refuses meshes
// with n > 16). Scales as sqrt(y) in the coefficient.
double estimate_c_inv(const Mesh& mesh, double coefficient);

// Closed-form bound constants for the material laws: stiffness bounds from
// the eigenvalues of the endpoint Voigt matrices, c_T = C_T = xi * sqrt(2),
// modulus and Biot-Willis bounds from the endpoint values, L = 4 beta^2.
// c_inv_unit is the unit-coefficient estimate (weighted internally by the
// mobility or permeability where the bound needs it).
ConvergenceConstants derive_constants(const MaterialParams& params,
                                      double c_inv_unit, double c_omega);

enum class ParameterDependence { StateIndependent, StateDependent };

struct ContractionBound {
  double rate = 0.0;
  double beta_ch = 0.0, beta_b = 0.0;
  double L_ch = 0.0, L_b = 0.0;
};

// Theoretical linear-convergence factor of the alternating scheme. The
// state-independent variant uses beta_b = beta_ch and factor
// (1 - beta_ch/L_ch)(1 - beta_b); the state-dependent variant uses the
// min-expression for beta_b and L_b = 2. Throws DomainError if the
// resulting rate falls outside (0, 1).
ContractionBound contraction_bound(const ConvergenceConstants& constants,
                                   const MaterialParams& params, double tau,
                                   double h, ParameterDependence dependence);

// Least-squares estimate of the geometric decay ratio of a nonincreasing
// potential sequence H_0..H_K: fits log(H_i - H_K) over i in [0, K-2],
// keeping the positive prefix, and returns exp(slope). Throws
// MonotonicityError if the sequence increases beyond roundoff slack,
// std::invalid_argument for fewer than 3 values, DomainError if fewer than
// 2 fit points remain.
double estimate_contraction(std::span<const double> potentials);

// Per-step balance residuals of the lumped integrals of phi and theta
// against the source identities int(phi^n - phi^{n-1}) = tau int(R).
struct ConservationReport {
  std::vector<double> phi_drift;
  std::vector<double> theta_drift;
  double max_phi_drift = 0.0;
  double max_theta_drift = 0.0;
};

ConservationReport conservation_report(const RunRecord& run, const Mesh& mesh);

}  // namespace chb
