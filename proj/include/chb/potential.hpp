#pragma once

#include "chb/dual_norm.hpp"
#include "chb/mesh.hpp"
#include "chb/physics.hpp"
#include "chb/state.hpp"

namespace chb {

// Step potential of the semi-implicit scheme,
//
//   H(phi, u, theta) = |phi - phi_prev - tau R|^2_* / (2 tau)
//                    + E_c(phi, eps(u), theta; phi_prev)
//                    + |theta - theta_prev - tau S_f|^2_* / (2 tau)
//                    + (E_lag(prev), phi) - (f, u),
//
// where the starred norms are the mobility- and permeability-weighted dual
// norms, E_c carries the stiffness and Biot modulus frozen at the previous
// step, and E_lag collects the lagged derivative terms. The discrete
// realization matches the assembled residuals exactly: the residual of the
// semi-implicit system is the gradient of this functional on the two affine
// mean-constraint manifolds, so alternating solves decrease it monotonically
// up to solver precision.
class PotentialContext {
 public:
  PotentialContext(const Mesh& mesh, const MaterialParams& params,
                   const SourceData& sources, double tau);

  // Caches the previous-step state and the lag pairing vector.
  void set_previous(const State& previous);

  // Evaluates the potential at a candidate (phi, u, theta); mu and p are
  // ignored. Throws DomainError if either affine constraint
  // sum_i w_i (phi_i - phi_prev_i - tau R_i) = 0 (and the theta analogue)
  // is violated beyond 1e-8 * (1 + |q|_inf).
  double evaluate(const State& candidate) const;

  const State& previous() const { return previous_; }

 private:
  const Mesh& mesh_;
  MaterialParams params_;
  SourceData sources_;
  double tau_;
  DualNormContext ch_dual_;
  DualNormContext flow_dual_;
  DenseVector load_x_, load_y_;  // consistent-mass images of f
  State previous_;
  DenseVector lag_;  // nodal pairing coefficients of the lagged terms
  bool has_previous_ = false;
};

// One-shot evaluation (builds a context; prefer the class in loops).
double potential_semi_implicit(const Mesh& mesh, const State& candidate,
                               const State& previous,
                               const MaterialParams& params,
                               const SourceData& sources, double tau);

}  // namespace chb
