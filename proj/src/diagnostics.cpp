#include "chb/diagnostics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chb/discretization.hpp"
#include "chb/errors.hpp"

namespace chb {

namespace {

Eigen::MatrixXd to_dense(const SparseMatrix& A) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(A.rows(), A.cols());
  const auto rp = A.row_ptr();
  const auto ci = A.col_idx();
  const auto va = A.values();
  for (int r = 0; r < A.rows(); ++r)
    for (int k = rp[r]; k < rp[r + 1]; ++k) M(r, ci[k]) += va[k];
  return M;
}

}  // namespace

void ConvergenceConstants::validate() const {
  const double vals[] = {C_inv, C_Omega, c_C, C_C,     c_T,    C_T,
                         c_M,   C_M,     c_alpha, C_alpha, L_psi_c};
  for (double v : vals)
    if (!(v > 0.0))
      throw DomainError("ConvergenceConstants: all entries must be positive");
  if (c_C > C_C || c_T > C_T || c_M > C_M || c_alpha > C_alpha)
    throw DomainError("ConvergenceConstants: lower bound exceeds upper bound");
  if (C_alpha > 1.0)
    throw DomainError("ConvergenceConstants: C_alpha must not exceed 1");
}

double estimate_c_inv(const Mesh& mesh, double coefficient) {
  if (!(coefficient > 0.0))
    throw std::invalid_argument("estimate_c_inv: coefficient must be positive");
  if (mesh.n > 16)
    throw DomainError("estimate_c_inv: dense eigensolve refused for n > 16");
  const Eigen::MatrixXd K = to_dense(assemble_stiffness_matrix(mesh, coefficient));
  const Eigen::MatrixXd M = to_dense(assemble_mass_matrix(mesh));
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, M);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("estimate_c_inv: eigensolver failed");
  return mesh.h * std::sqrt(es.eigenvalues().maxCoeff());
}

ConvergenceConstants derive_constants(const MaterialParams& params,
                                      double c_inv_unit, double c_omega) {
  ConvergenceConstants c;
  c.C_inv = c_inv_unit;
  c.C_Omega = c_omega;
  Eigen::Matrix3d Cm, Cp;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Cm(i, j) = params.C_minus[i][j];
      Cp(i, j) = params.C_plus[i][j];
    }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> em(Cm), ep(Cp);
  c.c_C = std::min(em.eigenvalues().minCoeff(), ep.eigenvalues().minCoeff());
  c.C_C = std::max(em.eigenvalues().maxCoeff(), ep.eigenvalues().maxCoeff());
  c.c_T = c.C_T = params.xi * std::sqrt(2.0);
  c.c_M = std::min(params.M_minus, params.M_plus);
  c.C_M = std::max(params.M_minus, params.M_plus);
  c.c_alpha = std::min(params.alpha_minus, params.alpha_plus);
  c.C_alpha = std::max(params.alpha_minus, params.alpha_plus);
  c.L_psi_c = psi_c_lipschitz(params.beta_cut);
  return c;
}

ContractionBound contraction_bound(const ConvergenceConstants& constants,
                                   const MaterialParams& params, double tau,
                                   double h, ParameterDependence dependence) {
  constants.validate();
  if (!(tau > 0.0) || !(h > 0.0))
    throw std::invalid_argument("contraction_bound: tau and h must be positive");

  const double cinv2_m = params.mobility * constants.C_inv * constants.C_inv;
  const double cinv2_k = params.kappa * constants.C_inv * constants.C_inv;
  const double gl = params.gamma * params.ell;
  const double com2 = constants.C_Omega * constants.C_Omega;
  const double CT2 = constants.C_T * constants.C_T;

  ContractionBound b;
  const double denom = h * h / (tau * cinv2_m * constants.C_C * CT2) +
                       gl / (com2 * constants.C_C * CT2) + 1.0;
  b.beta_ch = 1.0 - 1.0 / denom;
  b.L_ch = 1.0 + (params.gamma / params.ell) * constants.L_psi_c /
                     (h * h / (tau * cinv2_m) + gl / com2 +
                      constants.c_C * constants.c_T * constants.c_T);

  if (dependence == ParameterDependence::StateIndependent) {
    b.beta_b = b.beta_ch;
    b.L_b = 1.0;
    b.rate = (1.0 - b.beta_ch / b.L_ch) * (1.0 - b.beta_b);
  } else {
    const double tilde =
        1.0 - constants.C_alpha /
                  std::sqrt(h * h / (tau * constants.C_M * cinv2_k) + 1.0);
    b.beta_b = std::min(b.beta_ch, tilde);
    b.L_b = 2.0;
    b.rate = (1.0 - b.beta_ch / b.L_ch) * (1.0 - b.beta_b / b.L_b);
  }
  if (!(b.rate > 0.0) || !(b.rate < 1.0))
    throw DomainError("contraction_bound: rate outside (0, 1); an assumption "
                      "behind the bound is violated");
  return b;
}

double estimate_contraction(std::span<const double> potentials) {
  const int n = static_cast<int>(potentials.size());
  if (n < 3)
    throw std::invalid_argument("estimate_contraction: need at least 3 values");
  const double slack = 1e-12 * (1.0 + std::abs(potentials[0]));
  for (int i = 1; i < n; ++i)
    if (potentials[i] > potentials[i - 1] + slack)
      throw MonotonicityError("estimate_contraction: potential increased at "
                              "index " + std::to_string(i));
  const int K = n - 1;
  std::vector<double> xs, ys;
  for (int i = 0; i + 2 <= K; ++i) {
    const double g = potentials[i] - potentials[K];
    if (!(g > 0.0)) break;
    xs.push_back(static_cast<double>(i));
    ys.push_back(std::log(g));
  }
  if (xs.size() < 2)
    throw DomainError("estimate_contraction: fewer than 2 usable gap values");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return std::exp(slope);
}

ConservationReport conservation_report(const RunRecord& run, const Mesh&) {
  ConservationReport rep;
  if (run.steps.size() < 2) return rep;
  const double tau = run.config.tau;
  for (std::size_t i = 1; i < run.steps.size(); ++i) {
    const double dphi =
        run.steps[i].int_phi - run.steps[i - 1].int_phi - tau * run.int_R;
    const double dth =
        run.steps[i].int_theta - run.steps[i - 1].int_theta - tau * run.int_Sf;
    rep.phi_drift.push_back(dphi);
    rep.theta_drift.push_back(dth);
    rep.max_phi_drift = std::max(rep.max_phi_drift, std::abs(dphi));
    rep.max_theta_drift = std::max(rep.max_theta_drift, std::abs(dth));
  }
  return rep;
}

}  // namespace chb
