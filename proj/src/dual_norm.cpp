#include "chb/dual_norm.hpp"

#include <cmath>
#include <stdexcept>

#include "chb/discretization.hpp"
#include "chb/errors.hpp"

namespace chb {

DualNormContext::DualNormContext(const Mesh& mesh, double coefficient)
    : coefficient_(coefficient),
      mass_(assemble_mass_matrix(mesh)),
      lumped_(lumped_mass_vector(mesh)),
      total_weight_(0.0),
      solver_(assemble_stiffness_matrix(mesh, coefficient), lumped_) {
  if (!(coefficient > 0.0))
    throw std::invalid_argument("dual norm coefficient must be positive");
  for (double w : lumped_) total_weight_ += w;
}

double DualNormContext::evaluate(std::span<const double> q,
                                 bool project) const {
  if (static_cast<int>(q.size()) != mass_.rows())
    throw std::invalid_argument("dual_norm_sq: size mismatch");
  double mean = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) mean += lumped_[i] * q[i];
  mean /= total_weight_;
  if (!project && std::abs(mean) * total_weight_ > 1e-9 * (1.0 + norm_inf(q)))
    throw CompatibilityError("dual_norm_sq: input has nonzero lumped mean");
  DenseVector qp(q.begin(), q.end());
  for (double& v : qp) v -= mean;
  const DenseVector b = mass_.matvec(qp);
  const DenseVector v = solver_.solve(b);
  return dot(v, b);
}

double DualNormContext::dual_norm_sq(std::span<const double> q) const {
  return evaluate(q, false);
}

double DualNormContext::dual_norm_sq_projected(std::span<const double> q) const {
  return evaluate(q, true);
}

DenseVector DualNormContext::auxiliary_solution(std::span<const double> q) const {
  return solver_.solve(mass_.matvec(q));
}

double dual_norm_sq(const Mesh& mesh, std::span<const double> q,
                    double coefficient) {
  return DualNormContext(mesh, coefficient).dual_norm_sq(q);
}

}  // namespace chb
