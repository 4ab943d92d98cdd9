#include "chb/potential.hpp"

#include <cmath>
#include <stdexcept>

#include "chb/discretization.hpp"
#include "chb/errors.hpp"

namespace chb {

PotentialContext::PotentialContext(const Mesh& mesh,
                                   const MaterialParams& params,
                                   const SourceData& sources, double tau)
    : mesh_(mesh),
      params_(params),
      sources_(sources),
      tau_(tau),
      ch_dual_(mesh, params.mobility),
      flow_dual_(mesh, params.kappa),
      previous_(State::zero(mesh)) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  params_.validate();
  load_x_ = ch_dual_.mass().matvec(sources_.f_x);
  load_y_ = ch_dual_.mass().matvec(sources_.f_y);
}

void PotentialContext::set_previous(const State& previous) {
  if (previous.n_vertices() != mesh_.n_vertices())
    throw std::invalid_argument("set_previous: size mismatch");
  previous_ = previous;
  has_previous_ = true;

  const int nv = mesh_.n_vertices();
  lag_.assign(nv, 0.0);
  const double gol = params_.gamma / params_.ell;
  for (int t = 0; t < mesh_.n_triangles(); ++t) {
    const auto& tri = mesh_.triangles[t];
    const auto& g = mesh_.grad[t];
    const double third = mesh_.area[t] / 3.0;
    Voigt epsb{0, 0, 0};
    for (int k = 0; k < 3; ++k) {
      const int v = tri[k];
      const double ux = mesh_.on_boundary[v] ? 0.0 : previous_.ux[v];
      const double uy = mesh_.on_boundary[v] ? 0.0 : previous_.uy[v];
      epsb[0] += ux * g[k][0];
      epsb[1] += uy * g[k][1];
      epsb[2] += ux * g[k][1] + uy * g[k][0];
    }
    const double div_ub = epsb[0] + epsb[1];
    for (int k = 0; k < 3; ++k) {
      const int v = tri[k];
      const double phib = previous_.phi[v];
      const MaterialEval b0 = material_eval(params_, phib);
      const MaterialEval b1 = material_eval_prime(params_, phib);
      const Voigt etb{epsb[0] - params_.xi * phib, epsb[1] - params_.xi * phib,
                      epsb[2]};
      const double wb = previous_.theta[v] - b0.alpha * div_ub;
      double val = -gol * psi_e_prime(phib);
      val += 0.5 * voigt_dot(etb, voigt_apply(b1.C, etb));
      val += 0.5 * b1.M * wb * wb;
      lag_[v] += third * val;
    }
  }
}

double PotentialContext::evaluate(const State& candidate) const {
  if (!has_previous_)
    throw std::logic_error("PotentialContext: set_previous not called");
  if (candidate.n_vertices() != mesh_.n_vertices())
    throw std::invalid_argument("evaluate: size mismatch");

  const int nv = mesh_.n_vertices();
  const DenseVector& w = ch_dual_.lumped_weights();

  DenseVector q_phi(nv), q_theta(nv);
  for (int v = 0; v < nv; ++v) {
    q_phi[v] = candidate.phi[v] - previous_.phi[v] - tau_ * sources_.R[v];
    q_theta[v] =
        candidate.theta[v] - previous_.theta[v] - tau_ * sources_.S_f[v];
  }
  auto check_mean = [&](const DenseVector& q, const char* which) {
    double m = 0.0;
    for (int v = 0; v < nv; ++v) m += w[v] * q[v];
    if (std::abs(m) > 1e-8 * (1.0 + norm_inf(q)))
      throw DomainError(std::string("potential: ") + which +
                        " mean constraint violated");
  };
  check_mean(q_phi, "phi");
  check_mean(q_theta, "theta");

  double value = ch_dual_.dual_norm_sq_projected(q_phi) / (2.0 * tau_);
  value += flow_dual_.dual_norm_sq_projected(q_theta) / (2.0 * tau_);

  const double gol = params_.gamma / params_.ell;
  double quad = 0.0, nodal = 0.0;
  for (int t = 0; t < mesh_.n_triangles(); ++t) {
    const auto& tri = mesh_.triangles[t];
    const auto& g = mesh_.grad[t];
    const double A = mesh_.area[t];
    const double third = A / 3.0;
    Voigt eps{0, 0, 0};
    double gphi[2] = {0.0, 0.0};
    for (int k = 0; k < 3; ++k) {
      const int v = tri[k];
      const double ux = mesh_.on_boundary[v] ? 0.0 : candidate.ux[v];
      const double uy = mesh_.on_boundary[v] ? 0.0 : candidate.uy[v];
      eps[0] += ux * g[k][0];
      eps[1] += uy * g[k][1];
      eps[2] += ux * g[k][1] + uy * g[k][0];
      gphi[0] += candidate.phi[v] * g[k][0];
      gphi[1] += candidate.phi[v] * g[k][1];
    }
    const double div_u = eps[0] + eps[1];
    quad += 0.5 * params_.gamma * params_.ell * A *
            (gphi[0] * gphi[0] + gphi[1] * gphi[1]);
    for (int k = 0; k < 3; ++k) {
      const int v = tri[k];
      const double phi = candidate.phi[v];
      const double phib = previous_.phi[v];
      const MaterialEval frozen = material_eval(params_, phib);
      const double alpha = material_eval(params_, phi).alpha;
      const Voigt et{eps[0] - params_.xi * phi, eps[1] - params_.xi * phi,
                     eps[2]};
      const double wv = candidate.theta[v] - alpha * div_u;
      quad += third * (0.5 * voigt_dot(et, voigt_apply(frozen.C, et)) +
                       0.5 * frozen.M * wv * wv);
      nodal += third * gol * psi_c(phi, params_.beta_cut);
    }
  }
  value += quad + nodal;

  for (int v = 0; v < nv; ++v) {
    value += lag_[v] * candidate.phi[v];
    const double ux = mesh_.on_boundary[v] ? 0.0 : candidate.ux[v];
    const double uy = mesh_.on_boundary[v] ? 0.0 : candidate.uy[v];
    value -= load_x_[v] * ux + load_y_[v] * uy;
  }
  return value;
}

double potential_semi_implicit(const Mesh& mesh, const State& candidate,
                               const State& previous,
                               const MaterialParams& params,
                               const SourceData& sources, double tau) {
  PotentialContext ctx(mesh, params, sources, tau);
  ctx.set_previous(previous);
  return ctx.evaluate(candidate);
}

}  // namespace chb
