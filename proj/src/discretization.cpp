#include "chb/discretization.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace chb {

namespace {

enum Field { F_PHI = 0, F_MU, F_UX, F_UY, F_TH, F_P, F_COUNT };

struct KindInfo {
  std::array<int, F_COUNT> pos;  // field -> slot in the unknown vector, -1 if absent
  int n_fields = 0;
  bool eq_a = false, eq_b = false, eq_c = false, eq_d = false, eq_e = false;
  std::vector<std::pair<int, int>> blocks;          // Jacobian (row, col) field pairs
  std::array<std::array<int, F_COUNT>, F_COUNT> bidx{};  // field pair -> block id

  bool has(int f) const { return pos[f] >= 0; }
};

KindInfo make_info(std::vector<int> fields, bool a, bool b, bool c, bool d,
                   bool e, std::vector<std::pair<int, int>> blocks) {
  KindInfo info;
  info.pos.fill(-1);
  for (std::size_t i = 0; i < fields.size(); ++i)
    info.pos[fields[i]] = static_cast<int>(i);
  info.n_fields = static_cast<int>(fields.size());
  info.eq_a = a;
  info.eq_b = b;
  info.eq_c = c;
  info.eq_d = d;
  info.eq_e = e;
  info.blocks = std::move(blocks);
  for (auto& row : info.bidx) row.fill(-1);
  for (std::size_t k = 0; k < info.blocks.size(); ++k)
    info.bidx[info.blocks[k].first][info.blocks[k].second] = static_cast<int>(k);
  return info;
}

const KindInfo& kind_info(SystemKind kind) {
  static const KindInfo mono = make_info(
      {F_PHI, F_MU, F_UX, F_UY, F_TH, F_P}, true, true, true, true, true,
      {{F_PHI, F_PHI}, {F_PHI, F_MU},
       {F_MU, F_PHI},  {F_MU, F_MU},  {F_MU, F_UX}, {F_MU, F_UY}, {F_MU, F_TH},
       {F_UX, F_PHI},  {F_UX, F_UX},  {F_UX, F_UY}, {F_UX, F_TH},
       {F_UY, F_PHI},  {F_UY, F_UX},  {F_UY, F_UY}, {F_UY, F_TH},
       {F_TH, F_TH},   {F_TH, F_P},
       {F_P, F_PHI},   {F_P, F_UX},   {F_P, F_UY},  {F_P, F_TH}, {F_P, F_P}});
  static const KindInfo ch = make_info(
      {F_PHI, F_MU}, true, true, false, false, false,
      {{F_PHI, F_PHI}, {F_PHI, F_MU}, {F_MU, F_PHI}, {F_MU, F_MU}});
  static const KindInfo biot = make_info(
      {F_UX, F_UY, F_TH, F_P}, false, false, true, true, true,
      {{F_UX, F_UX}, {F_UX, F_UY}, {F_UX, F_TH},
       {F_UY, F_UX}, {F_UY, F_UY}, {F_UY, F_TH},
       {F_TH, F_TH}, {F_TH, F_P},
       {F_P, F_UX},  {F_P, F_UY},  {F_P, F_TH}, {F_P, F_P}});
  static const KindInfo elast = make_info(
      {F_UX, F_UY}, false, false, true, false, false,
      {{F_UX, F_UX}, {F_UX, F_UY}, {F_UY, F_UX}, {F_UY, F_UY}});
  static const KindInfo flow = make_info(
      {F_TH, F_P}, false, false, false, true, true,
      {{F_TH, F_TH}, {F_TH, F_P}, {F_P, F_TH}, {F_P, F_P}});
  switch (kind) {
    case SystemKind::MonolithicSemiImplicit:
    case SystemKind::MonolithicImplicit:
      return mono;
    case SystemKind::ChSubsystem:
      return ch;
    case SystemKind::BiotSubsystem:
      return biot;
    case SystemKind::ElasticityOnly:
      return elast;
    case SystemKind::FlowOnly:
      return flow;
  }
  throw std::invalid_argument("unknown SystemKind");
}

TimeDisc effective_disc(SystemKind kind, TimeDisc disc) {
  if (kind == SystemKind::MonolithicSemiImplicit) return TimeDisc::SemiImplicit;
  if (kind == SystemKind::MonolithicImplicit) return TimeDisc::Implicit;
  return disc;
}

const std::vector<double>& field_of(const State& s, int f) {
  switch (f) {
    case F_PHI: return s.phi;
    case F_MU: return s.mu;
    case F_UX: return s.ux;
    case F_UY: return s.uy;
    case F_TH: return s.theta;
    default: return s.p;
  }
}

std::vector<double>& field_of(State& s, int f) {
  return const_cast<std::vector<double>&>(field_of(static_cast<const State&>(s), f));
}

// Everything the element kernel needs at one vertex.
struct VertexEval {
  double phi, phib, mu, th, thb, R, Sf;
  double alpha, dalpha, d2alpha;    // at the effective current phi
  double M, dM, d2M;                // semi: at previous phi, chains zero
  VoigtMatrix C, dC, d2C;
  double lag_e, lag_f;              // lagged derivative terms (semi only)
};

constexpr Voigt kVoigtId{1.0, 1.0, 0.0};

double tr_stress(const VoigtMatrix& C, const Voigt& v) {
  const Voigt s = voigt_apply(C, v);
  return s[0] + s[1];
}

struct Workspace {
  const KindInfo& info;
  TimeDisc disc;
  const Mesh& mesh;
  const MaterialParams& prm;
  const SourceData& src;
  double tau;
  const State& current;
  const State& previous;
  const State& lagged;
  int rsize;  // residual slots per element
  int jsize;  // jacobian slots per element

  const std::vector<double>& eff(int f) const {
    return info.has(f) ? field_of(current, f) : field_of(lagged, f);
  }
};

// Local P1 matrices: consistent mass and stiffness on one triangle.
void local_mass(double A, double M[3][3]) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) M[i][j] = A / 12.0 * (i == j ? 2.0 : 1.0);
}

void element_kernel(const Workspace& ws, int t, double* rloc, double* jloc) {
  const KindInfo& info = ws.info;
  const MaterialParams& prm = ws.prm;
  const Mesh& mesh = ws.mesh;
  const auto& tri = mesh.triangles[t];
  const auto& g = mesh.grad[t];
  const double A = mesh.area[t];
  const double third = A / 3.0;
  const double tau = ws.tau;
  const bool semi = ws.disc == TimeDisc::SemiImplicit;

  double Mloc[3][3], Kloc[3][3];
  local_mass(A, Mloc);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      Kloc[i][j] = A * (g[i][0] * g[j][0] + g[i][1] * g[j][1]);

  const auto& ephi = ws.eff(F_PHI);
  const auto& emu = ws.eff(F_MU);
  const auto& eux = ws.eff(F_UX);
  const auto& euy = ws.eff(F_UY);
  const auto& eth = ws.eff(F_TH);
  const auto& ep = ws.eff(F_P);

  bool bnd[3];
  double fx[3], fy[3], pv[3];
  VertexEval V[3];
  Voigt eps{0, 0, 0}, epsb{0, 0, 0};
  for (int k = 0; k < 3; ++k) {
    const int v = tri[k];
    bnd[k] = mesh.on_boundary[v] != 0;
    VertexEval& e = V[k];
    e.phi = ephi[v];
    e.phib = ws.previous.phi[v];
    e.mu = emu[v];
    e.th = eth[v];
    e.thb = ws.previous.theta[v];
    pv[k] = ep[v];
    e.R = ws.src.R[v];
    e.Sf = ws.src.S_f[v];
    fx[k] = ws.src.f_x[v];
    fy[k] = ws.src.f_y[v];
    const double ux = bnd[k] ? 0.0 : eux[v];
    const double uy = bnd[k] ? 0.0 : euy[v];
    eps[0] += ux * g[k][0];
    eps[1] += uy * g[k][1];
    eps[2] += ux * g[k][1] + uy * g[k][0];
    const double uxb = bnd[k] ? 0.0 : ws.previous.ux[v];
    const double uyb = bnd[k] ? 0.0 : ws.previous.uy[v];
    epsb[0] += uxb * g[k][0];
    epsb[1] += uyb * g[k][1];
    epsb[2] += uxb * g[k][1] + uyb * g[k][0];
  }
  const double div_u = eps[0] + eps[1];
  const double div_ub = epsb[0] + epsb[1];

  for (int k = 0; k < 3; ++k) {
    VertexEval& e = V[k];
    // alpha and its chain always follow the effective current phi
    {
      const MaterialEval m0 = material_eval(prm, e.phi);
      const MaterialEval m1 = material_eval_prime(prm, e.phi);
      const MaterialEval m2 = material_eval_second(prm, e.phi);
      e.alpha = m0.alpha;
      e.dalpha = m1.alpha;
      e.d2alpha = m2.alpha;
      if (!semi) {
        e.M = m0.M;
        e.dM = m1.M;
        e.d2M = m2.M;
        e.C = m0.C;
        e.dC = m1.C;
        e.d2C = m2.C;
        e.lag_e = 0.0;
        e.lag_f = 0.0;
      }
    }
    if (semi) {
      const MaterialEval b0 = material_eval(prm, e.phib);
      const MaterialEval b1 = material_eval_prime(prm, e.phib);
      e.M = b0.M;
      e.dM = 0.0;
      e.d2M = 0.0;
      e.C = b0.C;
      for (auto& row : e.dC) row.fill(0.0);
      for (auto& row : e.d2C) row.fill(0.0);
      const Voigt etb{epsb[0] - prm.xi * e.phib, epsb[1] - prm.xi * e.phib,
                      epsb[2]};
      e.lag_e = 0.5 * voigt_dot(etb, voigt_apply(b1.C, etb));
      const double wb = e.thb - b0.alpha * div_ub;
      e.lag_f = 0.5 * b1.M * wb * wb;
    }
  }

  const int rsz = 3;
  auto R = [&](int f, int k) -> double& { return rloc[info.pos[f] * rsz + k]; };
  auto J = [&](int rf, int cf, int i, int j) -> double& {
    return jloc[info.bidx[rf][cf] * 9 + i * 3 + j];
  };

  for (int i = 0; i < info.n_fields * 3; ++i) rloc[i] = 0.0;
  if (jloc)
    for (std::size_t i = 0; i < info.blocks.size() * 9; ++i) jloc[i] = 0.0;

  // eq a: (phi - phib - tau R, eta) + tau m (grad mu, grad eta)
  if (info.eq_a) {
    for (int i = 0; i < 3; ++i) {
      double r = 0.0;
      for (int j = 0; j < 3; ++j) {
        r += Mloc[i][j] * (V[j].phi - V[j].phib - tau * V[j].R);
        r += tau * prm.mobility * Kloc[i][j] * V[j].mu;
      }
      R(F_PHI, i) += r;
      if (jloc)
        for (int j = 0; j < 3; ++j) {
          J(F_PHI, F_PHI, i, j) += Mloc[i][j];
          J(F_PHI, F_MU, i, j) += tau * prm.mobility * Kloc[i][j];
        }
    }
  }

  // eq b: (mu, eta) - gamma l (grad phi, grad eta)
  //       - (gamma/l)(psi_c'(phi) - psi_e'(phib), eta)
  //       - (E_elastic,phi + E_fluid,phi, eta)
  if (info.eq_b) {
    const double gl = prm.gamma * prm.ell;
    const double gol = prm.gamma / prm.ell;
    for (int i = 0; i < 3; ++i) {
      const VertexEval& e = V[i];
      double r = 0.0;
      for (int j = 0; j < 3; ++j) {
        r += Mloc[i][j] * V[j].mu;
        r -= gl * Kloc[i][j] * V[j].phi;
      }
      r -= gol * third *
           (psi_c_prime(e.phi, prm.beta_cut) - psi_e_prime(e.phib));
      const Voigt et{eps[0] - prm.xi * e.phi, eps[1] - prm.xi * e.phi, eps[2]};
      const double w = e.th - e.alpha * div_u;
      const double Eterm =
          -prm.xi * tr_stress(e.C, et) + 0.5 * voigt_dot(et, voigt_apply(e.dC, et)) +
          e.lag_e + 0.5 * e.dM * w * w - e.dalpha * e.M * w * div_u + e.lag_f;
      r -= third * Eterm;
      R(F_MU, i) += r;

      if (jloc) {
        for (int j = 0; j < 3; ++j) {
          J(F_MU, F_MU, i, j) += Mloc[i][j];
          J(F_MU, F_PHI, i, j) -= gl * Kloc[i][j];
        }
        // diagonal chain of the nodal terms
        double dphi = gol * psi_c_second(e.phi, prm.beta_cut);
        dphi += -2.0 * prm.xi * tr_stress(e.dC, et) +
                prm.xi * prm.xi * tr_stress(e.C, kVoigtId) +
                0.5 * voigt_dot(et, voigt_apply(e.d2C, et)) +
                0.5 * e.d2M * w * w - 2.0 * e.dalpha * e.dM * w * div_u -
                e.d2alpha * e.M * w * div_u +
                e.dalpha * e.dalpha * e.M * div_u * div_u;
        J(F_MU, F_PHI, i, i) -= third * dphi;
        if (info.has(F_TH)) {
          const double dth = e.dM * w - e.dalpha * e.M * div_u;
          J(F_MU, F_TH, i, i) -= third * dth;
        }
        if (info.has(F_UX)) {
          for (int j = 0; j < 3; ++j) {
            for (int c = 0; c < 2; ++c) {
              const Voigt B = c == 0 ? Voigt{g[j][0], 0.0, g[j][1]}
                                     : Voigt{0.0, g[j][1], g[j][0]};
              const double gd = g[j][c];
              double du = -prm.xi * tr_stress(e.C, B) +
                          voigt_dot(B, voigt_apply(e.dC, et)) -
                          e.dM * w * e.alpha * gd -
                          e.dalpha * e.M * (w - e.alpha * div_u) * gd;
              J(F_MU, c == 0 ? F_UX : F_UY, i, j) -= third * du;
            }
          }
        }
      }
    }
  }

  // eq c: (C(.)(eps(u) - T(phi)), eps(eta)) - (alpha M w, div eta) - (f, eta)
  if (info.eq_c) {
    Voigt savg{0, 0, 0};
    double cp_avg = 0.0;
    for (int k = 0; k < 3; ++k) {
      const VertexEval& e = V[k];
      const Voigt et{eps[0] - prm.xi * e.phi, eps[1] - prm.xi * e.phi, eps[2]};
      const Voigt s = voigt_apply(e.C, et);
      savg[0] += s[0];
      savg[1] += s[1];
      savg[2] += s[2];
      cp_avg += e.alpha * e.M * (e.th - e.alpha * div_u);
    }
    for (int i = 0; i < 3; ++i) {
      for (int c = 0; c < 2; ++c) {
        const Voigt B = c == 0 ? Voigt{g[i][0], 0.0, g[i][1]}
                               : Voigt{0.0, g[i][1], g[i][0]};
        double r = third * voigt_dot(savg, B) - third * cp_avg * g[i][c];
        for (int j = 0; j < 3; ++j)
          r -= Mloc[i][j] * (c == 0 ? fx[j] : fy[j]);
        R(c == 0 ? F_UX : F_UY, i) += r;
      }
    }
    if (jloc) {
      for (int i = 0; i < 3; ++i)
        for (int c = 0; c < 2; ++c) {
          const int rf = c == 0 ? F_UX : F_UY;
          const Voigt Bi = c == 0 ? Voigt{g[i][0], 0.0, g[i][1]}
                                  : Voigt{0.0, g[i][1], g[i][0]};
          for (int j = 0; j < 3; ++j) {
            const VertexEval& e = V[j];
            const double w = e.th - e.alpha * div_u;
            for (int c2 = 0; c2 < 2; ++c2) {
              const int cf = c2 == 0 ? F_UX : F_UY;
              const Voigt Bj = c2 == 0 ? Voigt{g[j][0], 0.0, g[j][1]}
                                       : Voigt{0.0, g[j][1], g[j][0]};
              double sum = 0.0;
              for (int k = 0; k < 3; ++k) {
                sum += voigt_dot(Bi, voigt_apply(V[k].C, Bj));
                sum += V[k].alpha * V[k].alpha * V[k].M * g[i][c] * g[j][c2];
              }
              J(rf, cf, i, j) += third * sum;
            }
            if (info.has(F_TH))
              J(rf, F_TH, i, j) -= third * e.alpha * e.M * g[i][c];
            if (info.has(F_PHI)) {
              const Voigt et{eps[0] - prm.xi * e.phi, eps[1] - prm.xi * e.phi,
                             eps[2]};
              Voigt ds = voigt_apply(e.dC, et);
              const Voigt cxi = voigt_apply(e.C, kVoigtId);
              ds[0] -= prm.xi * cxi[0];
              ds[1] -= prm.xi * cxi[1];
              ds[2] -= prm.xi * cxi[2];
              const double dcp = e.dalpha * e.M * w + e.alpha * e.dM * w -
                                 e.alpha * e.M * e.dalpha * div_u;
              J(rf, F_PHI, i, j) +=
                  third * voigt_dot(ds, Bi) - third * dcp * g[i][c];
            }
          }
        }
    }
  }

  // eq d: (theta - thetab - tau S_f, eta) + tau kappa (grad p, grad eta)
  if (info.eq_d) {
    for (int i = 0; i < 3; ++i) {
      double r = 0.0;
      for (int j = 0; j < 3; ++j) {
        r += Mloc[i][j] * (V[j].th - V[j].thb - tau * V[j].Sf);
        r += tau * prm.kappa * Kloc[i][j] * pv[j];
      }
      R(F_TH, i) += r;
      if (jloc)
        for (int j = 0; j < 3; ++j) {
          J(F_TH, F_TH, i, j) += Mloc[i][j];
          J(F_TH, F_P, i, j) += tau * prm.kappa * Kloc[i][j];
        }
    }
  }

  // eq e: (p, eta) - (M(.) (theta - alpha div u), eta)
  if (info.eq_e) {
    for (int i = 0; i < 3; ++i) {
      const VertexEval& e = V[i];
      const double w = e.th - e.alpha * div_u;
      double r = -third * e.M * w;
      for (int j = 0; j < 3; ++j) r += Mloc[i][j] * pv[j];
      R(F_P, i) += r;
      if (jloc) {
        for (int j = 0; j < 3; ++j) J(F_P, F_P, i, j) += Mloc[i][j];
        if (info.has(F_TH)) J(F_P, F_TH, i, i) -= third * e.M;
        if (info.has(F_UX))
          for (int j = 0; j < 3; ++j) {
            J(F_P, F_UX, i, j) += third * e.M * e.alpha * g[j][0];
            J(F_P, F_UY, i, j) += third * e.M * e.alpha * g[j][1];
          }
        if (info.has(F_PHI))
          J(F_P, F_PHI, i, i) -= third * (e.dM * w - e.M * e.dalpha * div_u);
      }
    }
  }
}

void check_sizes(const Workspace& ws) {
  const int nv = ws.mesh.n_vertices();
  auto chk = [&](const State& s, const char* which) {
    if (s.n_vertices() != nv ||
        static_cast<int>(s.mu.size()) != nv ||
        static_cast<int>(s.ux.size()) != nv ||
        static_cast<int>(s.uy.size()) != nv ||
        static_cast<int>(s.theta.size()) != nv ||
        static_cast<int>(s.p.size()) != nv)
      throw std::invalid_argument(std::string("state size mismatch: ") + which);
  };
  chk(ws.current, "current");
  chk(ws.previous, "previous");
  chk(ws.lagged, "lagged");
  if (static_cast<int>(ws.src.R.size()) != nv ||
      static_cast<int>(ws.src.S_f.size()) != nv ||
      static_cast<int>(ws.src.f_x.size()) != nv ||
      static_cast<int>(ws.src.f_y.size()) != nv)
    throw std::invalid_argument("source size mismatch");
  if (!(ws.tau > 0.0)) throw std::invalid_argument("tau must be positive");
}

}  // namespace

int system_size(SystemKind kind, const Mesh& mesh) {
  return kind_info(kind).n_fields * mesh.n_vertices();
}

DenseVector extract_unknowns(SystemKind kind, const State& s) {
  const KindInfo& info = kind_info(kind);
  const int nv = s.n_vertices();
  DenseVector x(static_cast<std::size_t>(info.n_fields) * nv);
  for (int f = 0; f < F_COUNT; ++f)
    if (info.has(f)) {
      const auto& src = field_of(s, f);
      std::copy(src.begin(), src.end(), x.begin() + info.pos[f] * nv);
    }
  return x;
}

void inject_unknowns(SystemKind kind, std::span<const double> x, State& s) {
  const KindInfo& info = kind_info(kind);
  const int nv = s.n_vertices();
  if (static_cast<int>(x.size()) != info.n_fields * nv)
    throw std::invalid_argument("inject_unknowns: size mismatch");
  for (int f = 0; f < F_COUNT; ++f)
    if (info.has(f)) {
      auto& dst = field_of(s, f);
      std::copy(x.begin() + info.pos[f] * nv,
                x.begin() + (info.pos[f] + 1) * nv, dst.begin());
    }
}

State initial_state(const Mesh& mesh) {
  State s = State::zero(mesh);
  s.phi = interpolate_indicator(mesh, [](double x, double) { return x > 0.5; });
  return s;
}

DenseVector residual(SystemKind kind, TimeDisc disc, const Mesh& mesh,
                     const MaterialParams& prm, const SourceData& src,
                     double tau, const State& current, const State& previous,
                     const State& lagged, Exec exec) {
  const KindInfo& info = kind_info(kind);
  Workspace ws{info, effective_disc(kind, disc), mesh, prm, src, tau,
               current,  previous, lagged, info.n_fields * 3,
               static_cast<int>(info.blocks.size()) * 9};
  check_sizes(ws);
  const int nt = mesh.n_triangles();
  const int nv = mesh.n_vertices();
  std::vector<double> rloc(static_cast<std::size_t>(nt) * ws.rsize);
  parallel_for(nt, exec, [&](std::ptrdiff_t t) {
    element_kernel(ws, static_cast<int>(t), rloc.data() + t * ws.rsize, nullptr);
  });

  DenseVector res(static_cast<std::size_t>(info.n_fields) * nv, 0.0);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    const double* r = rloc.data() + static_cast<std::size_t>(t) * ws.rsize;
    for (int f = 0; f < F_COUNT; ++f)
      if (info.has(f))
        for (int k = 0; k < 3; ++k)
          res[info.pos[f] * nv + tri[k]] += r[info.pos[f] * 3 + k];
  }
  if (info.has(F_UX)) {
    for (int v = 0; v < nv; ++v)
      if (mesh.on_boundary[v]) {
        res[info.pos[F_UX] * nv + v] = current.ux[v];
        res[info.pos[F_UY] * nv + v] = current.uy[v];
      }
  }
  return res;
}

SparseMatrix jacobian(SystemKind kind, TimeDisc disc, const Mesh& mesh,
                      const MaterialParams& prm, const SourceData& src,
                      double tau, const State& current, const State& previous,
                      const State& lagged, Exec exec) {
  const KindInfo& info = kind_info(kind);
  Workspace ws{info, effective_disc(kind, disc), mesh, prm, src, tau,
               current,  previous, lagged, info.n_fields * 3,
               static_cast<int>(info.blocks.size()) * 9};
  check_sizes(ws);
  const int nt = mesh.n_triangles();
  const int nv = mesh.n_vertices();
  std::vector<double> rloc(static_cast<std::size_t>(nt) * ws.rsize);
  std::vector<double> jloc(static_cast<std::size_t>(nt) * ws.jsize);
  parallel_for(nt, exec, [&](std::ptrdiff_t t) {
    element_kernel(ws, static_cast<int>(t), rloc.data() + t * ws.rsize,
                   jloc.data() + t * ws.jsize);
  });

  const int dim = info.n_fields * nv;
  AssemblyBuffer buf(dim, dim);
  buf.reserve(static_cast<std::size_t>(nt) * ws.jsize + 2 * nv);
  const bool has_u = info.has(F_UX);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    const double* jl = jloc.data() + static_cast<std::size_t>(t) * ws.jsize;
    for (std::size_t b = 0; b < info.blocks.size(); ++b) {
      const int rf = info.blocks[b].first;
      const int cf = info.blocks[b].second;
      const bool r_is_u = rf == F_UX || rf == F_UY;
      const bool c_is_u = cf == F_UX || cf == F_UY;
      for (int i = 0; i < 3; ++i) {
        if (r_is_u && mesh.on_boundary[tri[i]]) continue;
        for (int j = 0; j < 3; ++j) {
          if (c_is_u && mesh.on_boundary[tri[j]]) continue;
          const double v = jl[b * 9 + i * 3 + j];
          if (v != 0.0)
            buf.add(info.pos[rf] * nv + tri[i], info.pos[cf] * nv + tri[j], v);
        }
      }
    }
  }
  if (has_u)
    for (int v = 0; v < nv; ++v)
      if (mesh.on_boundary[v]) {
        buf.add(info.pos[F_UX] * nv + v, info.pos[F_UX] * nv + v, 1.0);
        buf.add(info.pos[F_UY] * nv + v, info.pos[F_UY] * nv + v, 1.0);
      }
  return SparseMatrix::from_buffer(buf);
}

SparseMatrix assemble_mass_matrix(const Mesh& mesh) {
  const int nv = mesh.n_vertices();
  AssemblyBuffer buf(nv, nv);
  buf.reserve(static_cast<std::size_t>(mesh.n_triangles()) * 9);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double A = mesh.area[t];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        buf.add(tri[i], tri[j], A / 12.0 * (i == j ? 2.0 : 1.0));
  }
  return SparseMatrix::from_buffer(buf);
}

SparseMatrix assemble_stiffness_matrix(const Mesh& mesh, double coefficient) {
  const int nv = mesh.n_vertices();
  AssemblyBuffer buf(nv, nv);
  buf.reserve(static_cast<std::size_t>(mesh.n_triangles()) * 9);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const auto& g = mesh.grad[t];
    const double A = mesh.area[t];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        buf.add(tri[i], tri[j],
                coefficient * A * (g[i][0] * g[j][0] + g[i][1] * g[j][1]));
  }
  return SparseMatrix::from_buffer(buf);
}

DenseVector lumped_mass_vector(const Mesh& mesh) {
  DenseVector w(mesh.n_vertices(), 0.0);
  for (int t = 0; t < mesh.n_triangles(); ++t)
    for (int k = 0; k < 3; ++k) w[mesh.triangles[t][k]] += mesh.area[t] / 3.0;
  return w;
}

double integrate(const Mesh& mesh, std::span<const double> nodal) {
  if (static_cast<int>(nodal.size()) != mesh.n_vertices())
    throw std::invalid_argument("integrate: size mismatch");
  const DenseVector w = lumped_mass_vector(mesh);
  double s = 0.0;
  for (int v = 0; v < mesh.n_vertices(); ++v) s += w[v] * nodal[v];
  return s;
}

}  // namespace chb
