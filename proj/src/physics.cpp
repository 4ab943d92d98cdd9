#include "chb/physics.hpp"

#include <cmath>
#include <stdexcept>

namespace chb {

Voigt voigt_apply(const VoigtMatrix& C, const Voigt& v) {
  return {C[0][0] * v[0] + C[0][1] * v[1] + C[0][2] * v[2],
          C[1][0] * v[0] + C[1][1] * v[1] + C[1][2] * v[2],
          C[2][0] * v[0] + C[2][1] * v[1] + C[2][2] * v[2]};
}

double voigt_dot(const Voigt& a, const Voigt& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

namespace {

bool spd3(const VoigtMatrix& C) {
  // symmetric + positive leading minors
  const double tol = 1e-12;
  if (std::abs(C[0][1] - C[1][0]) > tol || std::abs(C[0][2] - C[2][0]) > tol ||
      std::abs(C[1][2] - C[2][1]) > tol)
    return false;
  const double d1 = C[0][0];
  const double d2 = C[0][0] * C[1][1] - C[0][1] * C[1][0];
  const double d3 = C[0][0] * (C[1][1] * C[2][2] - C[1][2] * C[2][1]) -
                    C[0][1] * (C[1][0] * C[2][2] - C[1][2] * C[2][0]) +
                    C[0][2] * (C[1][0] * C[2][1] - C[1][1] * C[2][0]);
  return d1 > 0.0 && d2 > 0.0 && d3 > 0.0;
}

}  // namespace

void MaterialParams::validate() const {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (!(ell > 0.0)) throw std::invalid_argument("ell must be positive");
  if (!(mobility > 0.0)) throw std::invalid_argument("mobility must be positive");
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  if (!(xi >= 0.0)) throw std::invalid_argument("xi must be nonnegative");
  if (!(beta_cut > 1.0)) throw std::invalid_argument("beta_cut must exceed 1");
  if (!(M_minus > 0.0) || !(M_plus > 0.0))
    throw std::invalid_argument("Biot moduli must be positive");
  if (!(alpha_minus > 0.0) || !(alpha_plus > 0.0))
    throw std::invalid_argument("Biot-Willis coefficients must be positive");
  if (alpha_minus > 1.0 || alpha_plus > 1.0)
    throw std::invalid_argument("Biot-Willis coefficients must not exceed 1");
  if (!spd3(C_minus) || !spd3(C_plus))
    throw std::invalid_argument("stiffness matrices must be symmetric positive definite");
}

SourceData SourceData::zero(const Mesh& mesh) {
  SourceData s;
  const int nv = mesh.n_vertices();
  s.R.assign(nv, 0.0);
  s.S_f.assign(nv, 0.0);
  s.f_x.assign(nv, 0.0);
  s.f_y.assign(nv, 0.0);
  return s;
}

bool State::finite() const {
  auto ok = [](const std::vector<double>& v) {
    for (double x : v)
      if (!std::isfinite(x)) return false;
    return true;
  };
  return ok(phi) && ok(mu) && ok(ux) && ok(uy) && ok(theta) && ok(p);
}

double psi(double phi, double beta) {
  if (std::abs(phi) < beta) {
    const double t = 1.0 - phi * phi;
    return t * t;
  }
  const double b2 = beta * beta;
  return 2.0 * (b2 - 1.0) * phi * phi - (b2 * b2 - 1.0);
}

double psi_c(double phi, double beta) {
  if (std::abs(phi) < beta) return phi * phi * phi * phi + 1.0;
  const double b2 = beta * beta;
  return 2.0 * b2 * phi * phi - (b2 * b2 - 1.0);
}

double psi_e(double phi) { return 2.0 * phi * phi; }

double psi_prime(double phi, double beta) {
  return psi_c_prime(phi, beta) - psi_e_prime(phi);
}

double psi_c_prime(double phi, double beta) {
  if (std::abs(phi) < beta) return 4.0 * phi * phi * phi;
  return 4.0 * beta * beta * phi;
}

double psi_c_second(double phi, double beta) {
  if (std::abs(phi) < beta) return 12.0 * phi * phi;
  return 4.0 * beta * beta;
}

double psi_e_prime(double phi) { return 4.0 * phi; }

double psi_c_lipschitz(double beta) { return 4.0 * beta * beta; }

double interp_pi(double phi) {
  if (phi < -1.0) return 0.0;
  if (phi > 1.0) return 1.0;
  return 0.25 * (-phi * phi * phi + 3.0 * phi + 2.0);
}

double interp_pi_prime(double phi) {
  if (phi < -1.0 || phi > 1.0) return 0.0;
  return 0.75 * (1.0 - phi * phi);
}

double interp_pi_second(double phi) {
  if (phi < -1.0 || phi > 1.0) return 0.0;
  return -1.5 * phi;
}

MaterialEval material_eval(const MaterialParams& p, double phi) {
  const double w = interp_pi(phi);
  MaterialEval e;
  e.M = p.M_minus + w * (p.M_plus - p.M_minus);
  e.alpha = p.alpha_minus + w * (p.alpha_plus - p.alpha_minus);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      e.C[i][j] = p.C_minus[i][j] + w * (p.C_plus[i][j] - p.C_minus[i][j]);
  return e;
}

MaterialEval material_eval_prime(const MaterialParams& p, double phi) {
  const double w = interp_pi_prime(phi);
  MaterialEval e;
  e.M = w * (p.M_plus - p.M_minus);
  e.alpha = w * (p.alpha_plus - p.alpha_minus);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      e.C[i][j] = w * (p.C_plus[i][j] - p.C_minus[i][j]);
  return e;
}

MaterialEval material_eval_second(const MaterialParams& p, double phi) {
  const double w = interp_pi_second(phi);
  MaterialEval e;
  e.M = w * (p.M_plus - p.M_minus);
  e.alpha = w * (p.alpha_plus - p.alpha_minus);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      e.C[i][j] = w * (p.C_plus[i][j] - p.C_minus[i][j]);
  return e;
}

EnergyBreakdown free_energy(const Mesh& mesh, const State& s,
                            const MaterialParams& p, Exec exec) {
  const int nt = mesh.n_triangles();
  std::vector<double> ei(nt), ee(nt), ef(nt);
  parallel_for(nt, exec, [&](std::ptrdiff_t t) {
    const auto& tri = mesh.triangles[t];
    const auto& g = mesh.grad[t];
    const double A = mesh.area[t];
    double gp[2] = {0.0, 0.0};
    Voigt eps{0.0, 0.0, 0.0};
    for (int k = 0; k < 3; ++k) {
      const int v = tri[k];
      gp[0] += s.phi[v] * g[k][0];
      gp[1] += s.phi[v] * g[k][1];
      const double uxv = mesh.on_boundary[v] ? 0.0 : s.ux[v];
      const double uyv = mesh.on_boundary[v] ? 0.0 : s.uy[v];
      eps[0] += uxv * g[k][0];
      eps[1] += uyv * g[k][1];
      eps[2] += uxv * g[k][1] + uyv * g[k][0];
    }
    const double div_u = eps[0] + eps[1];
    double well = 0.0, elast = 0.0, fluid = 0.0;
    for (int k = 0; k < 3; ++k) {
      const int v = tri[k];
      const double phiv = s.phi[v];
      const MaterialEval me = material_eval(p, phiv);
      well += psi(phiv, p.beta_cut);
      const Voigt et{eps[0] - p.xi * phiv, eps[1] - p.xi * phiv, eps[2]};
      elast += 0.5 * voigt_dot(et, voigt_apply(me.C, et));
      const double w = s.theta[v] - me.alpha * div_u;
      fluid += 0.5 * me.M * w * w;
    }
    ei[t] = p.gamma * ((A / 3.0) * well / p.ell +
                       0.5 * p.ell * A * (gp[0] * gp[0] + gp[1] * gp[1]));
    ee[t] = (A / 3.0) * elast;
    ef[t] = (A / 3.0) * fluid;
  });
  EnergyBreakdown out;
  for (int t = 0; t < nt; ++t) {
    out.interface += ei[t];
    out.elastic += ee[t];
    out.fluid += ef[t];
  }
  out.total = out.interface + out.elastic + out.fluid;
  return out;
}

}  // namespace chb
