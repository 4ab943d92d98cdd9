#include "chb/solvers.hpp"

#include <chrono>
#include <cmath>
#include <optional>
#include <utility>

#include "chb/errors.hpp"
#include "chb/potential.hpp"

namespace chb {

namespace {

// Shared per-run assets: the consistent mass matrix for the stopping test
// and the optional potential evaluator.
struct StepContext {
  SparseMatrix mass;
  PotentialContext* potential = nullptr;
};

double increment_norm_sq(const SparseMatrix& mass, const State& a,
                         const State& b) {
  auto term = [&](const std::vector<double>& x, const std::vector<double>& y) {
    DenseVector d(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) d[i] = y[i] - x[i];
    return dot(d, mass.matvec(d));
  };
  return term(a.phi, b.phi) + term(a.ux, b.ux) + term(a.uy, b.uy) +
         term(a.p, b.p);
}

// Potential value guarded against evaluations outside the affine constraint
// manifolds (possible with nonzero-mean sources at the initialization).
bool try_potential(const StepContext& ctx, const State& s, double& out) {
  if (!ctx.potential) return false;
  try {
    out = ctx.potential->evaluate(s);
    return true;
  } catch (const DomainError&) {
    return false;
  }
}

StepResult step_monolithic_ctx(const SolverConfig& cfg, const Mesh& mesh,
                               const MaterialParams& prm, const SourceData& src,
                               const State& previous, StepContext& ctx) {
  const SystemKind kind = cfg.time_disc == TimeDisc::SemiImplicit
                              ? SystemKind::MonolithicSemiImplicit
                              : SystemKind::MonolithicImplicit;
  StepResult res;
  res.state = previous;
  res.has_initial_potential =
      try_potential(ctx, res.state, res.initial_potential);

  for (int it = 1; it <= cfg.max_iter; ++it) {
    const DenseVector r = residual(kind, cfg.time_disc, mesh, prm, src, cfg.tau,
                                   res.state, previous, previous);
    SparseMatrix J = jacobian(kind, cfg.time_disc, mesh, prm, src, cfg.tau,
                              res.state, previous, previous);
    const LuFactorization lu(J);
    const DenseVector d = lu.solve(r);
    const State prev_iter = res.state;
    DenseVector x = extract_unknowns(kind, res.state);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= d[i];
    inject_unknowns(kind, x, res.state);
    res.outer_iterations = it;

    if (!res.state.finite()) {
      res.state = prev_iter;
      res.converged = false;
      break;
    }
    const double inc = increment_norm_sq(ctx.mass, prev_iter, res.state);
    IterationTrace tr;
    tr.increment_norm_sq = inc;
    tr.has_potential = try_potential(ctx, res.state, tr.potential);
    res.trace.push_back(tr);
    if (inc < cfg.tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

StepResult step_split2_ctx(const SolverConfig& cfg, const Mesh& mesh,
                           const MaterialParams& prm, const SourceData& src,
                           const State& previous, StepContext& ctx) {
  StepResult res;
  res.state = previous;
  res.has_initial_potential =
      try_potential(ctx, res.state, res.initial_potential);

  for (int it = 1; it <= cfg.max_iter; ++it) {
    const State outer_prev = res.state;
    res.outer_iterations = it;
    try {
      newton_solve(SystemKind::ChSubsystem, cfg.time_disc, mesh, prm, src,
                   cfg.tau, res.state, previous, res.state, cfg.newton_tol,
                   cfg.newton_max);
      if (ctx.potential) {
        double h;
        if (try_potential(ctx, res.state, h)) res.half_potentials.push_back(h);
      }
      newton_solve(SystemKind::BiotSubsystem, cfg.time_disc, mesh, prm, src,
                   cfg.tau, res.state, previous, res.state, cfg.newton_tol,
                   cfg.newton_max);
    } catch (const NonConvergenceError&) {
      res.converged = false;
      break;
    }
    IterationTrace tr;
    tr.increment_norm_sq = increment_norm_sq(ctx.mass, outer_prev, res.state);
    tr.has_potential = try_potential(ctx, res.state, tr.potential);
    if (tr.has_potential) res.half_potentials.push_back(tr.potential);
    res.trace.push_back(tr);
    if (tr.increment_norm_sq < cfg.tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

StepResult step_split3_ctx(const SolverConfig& cfg, const Mesh& mesh,
                           const MaterialParams& prm, const SourceData& src,
                           const State& previous, StepContext& ctx) {
  StepResult res;
  res.state = previous;
  res.has_initial_potential =
      try_potential(ctx, res.state, res.initial_potential);

  const SystemKind seq[] = {SystemKind::ChSubsystem, SystemKind::ElasticityOnly,
                            SystemKind::FlowOnly};
  for (int it = 1; it <= cfg.max_iter; ++it) {
    const State outer_prev = res.state;
    res.outer_iterations = it;
    bool failed = false;
    for (int s = 0; s < 3; ++s) {
      try {
        newton_solve(seq[s], cfg.time_disc, mesh, prm, src, cfg.tau, res.state,
                     previous, res.state, cfg.newton_tol, cfg.newton_max);
      } catch (const NonConvergenceError&) {
        failed = true;
        break;
      }
      if (ctx.potential && s < 2) {
        double h;
        if (try_potential(ctx, res.state, h)) res.half_potentials.push_back(h);
      }
    }
    if (failed) {
      res.converged = false;
      break;
    }
    IterationTrace tr;
    tr.increment_norm_sq = increment_norm_sq(ctx.mass, outer_prev, res.state);
    tr.has_potential = try_potential(ctx, res.state, tr.potential);
    if (tr.has_potential) res.half_potentials.push_back(tr.potential);
    res.trace.push_back(tr);
    if (tr.increment_norm_sq < cfg.tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

StepResult dispatch_step(const SolverConfig& cfg, const Mesh& mesh,
                         const MaterialParams& prm, const SourceData& src,
                         const State& previous, StepContext& ctx) {
  switch (cfg.scheme) {
    case Scheme::Mono:
      return step_monolithic_ctx(cfg, mesh, prm, src, previous, ctx);
    case Scheme::Split2:
      return step_split2_ctx(cfg, mesh, prm, src, previous, ctx);
    case Scheme::Split3:
      return step_split3_ctx(cfg, mesh, prm, src, previous, ctx);
  }
  throw std::invalid_argument("unknown scheme");
}

StepContext make_context(const SolverConfig& cfg, const Mesh& mesh,
                         std::optional<PotentialContext>& pot_storage,
                         const MaterialParams& prm, const SourceData& src) {
  StepContext ctx;
  ctx.mass = assemble_mass_matrix(mesh);
  if (cfg.trace_potential && cfg.time_disc == TimeDisc::SemiImplicit) {
    pot_storage.emplace(mesh, prm, src, cfg.tau);
    ctx.potential = &*pot_storage;
  }
  return ctx;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (n_steps < 0) throw std::invalid_argument("n_steps must be nonnegative");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  if (!(newton_tol > 0.0))
    throw std::invalid_argument("newton_tol must be positive");
  if (newton_max < 1)
    throw std::invalid_argument("newton_max must be at least 1");
}

std::pair<bool, double> stopping_test(const Mesh& mesh, const State& prev_iterate,
                                      const State& curr_iterate, double tol) {
  const SparseMatrix mass = assemble_mass_matrix(mesh);
  const double inc = increment_norm_sq(mass, prev_iterate, curr_iterate);
  return {inc < tol, inc};
}

NewtonResult newton_solve(SystemKind kind, TimeDisc disc, const Mesh& mesh,
                          const MaterialParams& params, const SourceData& sources,
                          double tau, State& state, const State& previous,
                          const State& lagged, double newton_tol,
                          int newton_max) {
  if (!(newton_tol > 0.0) || newton_max < 1)
    throw std::invalid_argument("newton_solve: invalid tolerance or budget");
  NewtonResult res;
  DenseVector r =
      residual(kind, disc, mesh, params, sources, tau, state, previous, lagged);
  double rn = norm_inf(r);
  res.residual_history.push_back(rn);
  res.final_residual = rn;
  if (rn <= newton_tol) return res;

  DenseVector best = extract_unknowns(kind, state);
  double best_rn = rn;
  for (int it = 1; it <= newton_max; ++it) {
    SparseMatrix J = jacobian(kind, disc, mesh, params, sources, tau, state,
                              previous, lagged);
    const LuFactorization lu(J);
    const DenseVector d = lu.solve(r);
    DenseVector x = extract_unknowns(kind, state);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= d[i];
    inject_unknowns(kind, x, state);
    res.iterations = it;

    r = residual(kind, disc, mesh, params, sources, tau, state, previous,
                 lagged);
    rn = norm_inf(r);
    res.residual_history.push_back(rn);
    res.final_residual = rn;
    if (!all_finite(x) || !std::isfinite(rn)) {
      inject_unknowns(kind, best, state);
      res.final_residual = best_rn;
      throw NonConvergenceError("newton_solve: non-finite iterate", best_rn);
    }
    if (rn < best_rn) {
      best_rn = rn;
      best = std::move(x);
    }
    if (rn <= newton_tol) return res;
  }
  inject_unknowns(kind, best, state);
  res.final_residual = best_rn;
  throw NonConvergenceError("newton_solve: iteration budget exhausted",
                            best_rn);
}

StepResult step_monolithic(const SolverConfig& cfg, const Mesh& mesh,
                           const MaterialParams& params,
                           const SourceData& sources, const State& previous) {
  std::optional<PotentialContext> pot;
  StepContext ctx = make_context(cfg, mesh, pot, params, sources);
  if (ctx.potential) ctx.potential->set_previous(previous);
  return step_monolithic_ctx(cfg, mesh, params, sources, previous, ctx);
}

StepResult step_split2(const SolverConfig& cfg, const Mesh& mesh,
                       const MaterialParams& params, const SourceData& sources,
                       const State& previous) {
  std::optional<PotentialContext> pot;
  StepContext ctx = make_context(cfg, mesh, pot, params, sources);
  if (ctx.potential) ctx.potential->set_previous(previous);
  return step_split2_ctx(cfg, mesh, params, sources, previous, ctx);
}

StepResult step_split3(const SolverConfig& cfg, const Mesh& mesh,
                       const MaterialParams& params, const SourceData& sources,
                       const State& previous) {
  std::optional<PotentialContext> pot;
  StepContext ctx = make_context(cfg, mesh, pot, params, sources);
  if (ctx.potential) ctx.potential->set_previous(previous);
  return step_split3_ctx(cfg, mesh, params, sources, previous, ctx);
}

int RunRecord::total_outer_iterations() const {
  int total = 0;
  for (const StepRow& row : steps) total += row.outer_iterations;
  return total;
}

RunRecord run_simulation(const Mesh& mesh, const MaterialParams& params,
                         const SourceData& sources, const SolverConfig& cfg) {
  params.validate();
  cfg.validate();

  RunRecord rec;
  rec.config = cfg;
  rec.params = params;
  rec.mesh_n = mesh.n;
  rec.int_R = integrate(mesh, sources.R);
  rec.int_Sf = integrate(mesh, sources.S_f);

  State state = initial_state(mesh);
  auto push_row = [&](int step, const State& s, int outer, bool converged,
                      double wall) {
    StepRow row;
    row.step = step;
    row.time = step * cfg.tau;
    row.energy = free_energy(mesh, s, params);
    row.outer_iterations = outer;
    row.converged = converged;
    row.wall_seconds = wall;
    row.int_phi = integrate(mesh, s.phi);
    row.int_theta = integrate(mesh, s.theta);
    rec.steps.push_back(row);
  };
  push_row(0, state, 0, true, 0.0);

  std::optional<PotentialContext> pot;
  StepContext ctx = make_context(cfg, mesh, pot, params, sources);

  const auto t_start = std::chrono::steady_clock::now();
  for (int step = 1; step <= cfg.n_steps; ++step) {
    const auto t0 = std::chrono::steady_clock::now();
    StepResult sr;
    try {
      if (ctx.potential) ctx.potential->set_previous(state);
      sr = dispatch_step(cfg, mesh, params, sources, state, ctx);
    } catch (const std::exception& e) {
      rec.aborted = true;
      rec.error = e.what();
      rec.all_converged = false;
      break;
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    state = sr.state;
    push_row(step, state, sr.outer_iterations, sr.converged, wall);
    if (cfg.trace_iterations || cfg.trace_potential) {
      rec.traces.push_back(std::move(sr.trace));
      rec.initial_potentials.push_back(sr.initial_potential);
      rec.has_initial_potential.push_back(sr.has_initial_potential ? 1 : 0);
      rec.half_potentials.push_back(std::move(sr.half_potentials));
    }
    if (cfg.keep_states) rec.states.push_back(state);
    if (!sr.converged) {
      rec.all_converged = false;
      rec.nonconverged_steps.push_back(step);
    }
  }
  rec.wall_total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  rec.final_state = std::move(state);
  return rec;
}

}  // namespace chb
