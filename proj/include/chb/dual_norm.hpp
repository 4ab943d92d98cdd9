#pragma once

#include <span>

#include "chb/linalg.hpp"
#include "chb/mesh.hpp"

namespace chb {

// Discrete negative-order norm ||q||^2 over the zero-mean subspace: solve
// (y grad v, grad l) = (q, l) for all l with zero-mean normalization and
// return (v, q) through the consistent mass matrix. The stiffness and mass
// matrices are factored once per (mesh, coefficient) pair, so repeated
// evaluations cost two triangular solves.
class DualNormContext {
 public:
  DualNormContext(const Mesh& mesh, double coefficient);

  // Throws CompatibilityError if the lumped mean of q exceeds
  // 1e-9 * (1 + ||q||_inf).
  double dual_norm_sq(std::span<const double> q) const;

  // Same evaluation, but the lumped mean is projected out first instead of
  // rejected; used where the caller has already validated the constraint.
  double dual_norm_sq_projected(std::span<const double> q) const;

  // Auxiliary solution v of the weighted Neumann problem for Mc * q.
  DenseVector auxiliary_solution(std::span<const double> q) const;

  double coefficient() const { return coefficient_; }
  const SparseMatrix& mass() const { return mass_; }
  const DenseVector& lumped_weights() const { return lumped_; }

 private:
  double evaluate(std::span<const double> q, bool project) const;

  double coefficient_;
  SparseMatrix mass_;
  DenseVector lumped_;
  double total_weight_;
  MeanConstrainedSolver solver_;
};

// One-shot convenience wrapper.
double dual_norm_sq(const Mesh& mesh, std::span<const double> q,
                    double coefficient);

}  // namespace chb
