#include <cmath>
#include <stdexcept>

#include "chb/errors.hpp"
#include "chb/physics.hpp"
#include "chb/solvers.hpp"
#include "doctest.h"

using namespace chb;

namespace {

SolverConfig quick_config(Scheme scheme, int n_steps) {
  SolverConfig cfg = SolverConfig::defaults();
  cfg.scheme = scheme;
  cfg.n_steps = n_steps;
  return cfg;
}

}  // namespace

TEST_CASE("solver config validation") {
  SolverConfig cfg = SolverConfig::defaults();
  CHECK_NOTHROW(cfg.validate());
  cfg.tau = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig::defaults();
  cfg.n_steps = -1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig::defaults();
  cfg.tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig::defaults();
  cfg.max_iter = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig::defaults();
  cfg.newton_max = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("stopping test measures phi, u and p but not theta or mu") {
  const Mesh mesh = build_mesh(2);
  const State a = State::zero(mesh);

  State b = a;
  for (double& v : b.mu) v = 5.0;
  for (double& v : b.theta) v = -3.0;
  auto [passed, inc] = stopping_test(mesh, a, b, 1e-30);
  CHECK(passed);
  CHECK(inc == 0.0);

  State c = a;
  for (double& v : c.phi) v = 0.25;
  auto [passed2, inc2] = stopping_test(mesh, a, c, 1e-6);
  CHECK(!passed2);
  // constant increment: squared L2 norm over the unit square is 0.25^2
  CHECK(inc2 == doctest::Approx(0.0625).epsilon(1e-13));

  State d = a;
  for (double& v : d.ux) v = 0.1;
  for (double& v : d.p) v = 0.2;
  auto [passed3, inc3] = stopping_test(mesh, a, d, 1e-6);
  CHECK(!passed3);
  CHECK(inc3 == doctest::Approx(0.01 + 0.04).epsilon(1e-13));
}

TEST_CASE("newton_solve") {
  const Mesh mesh = build_mesh(4);
  const MaterialParams prm = MaterialParams::defaults();
  const SourceData src = SourceData::zero(mesh);
  const State previous = initial_state(mesh);

  SUBCASE("the Biot subsystem is linear and converges in one iteration") {
    State s = previous;
    const NewtonResult r =
        newton_solve(SystemKind::BiotSubsystem, TimeDisc::SemiImplicit, mesh,
                     prm, src, 1e-3, s, previous, previous, 1e-10, 20);
    CHECK(r.iterations == 1);
    CHECK(r.final_residual < 1e-10);
    CHECK(s.finite());
  }

  SUBCASE("an already-converged state returns zero iterations") {
    State s = previous;
    newton_solve(SystemKind::BiotSubsystem, TimeDisc::SemiImplicit, mesh, prm,
                 src, 1e-3, s, previous, previous, 1e-10, 20);
    State again = s;
    const NewtonResult r =
        newton_solve(SystemKind::BiotSubsystem, TimeDisc::SemiImplicit, mesh,
                     prm, src, 1e-3, again, previous, previous, 1e-8, 20);
    CHECK(r.iterations == 0);
    CHECK(again.phi == s.phi);
    CHECK(again.p == s.p);
  }

  SUBCASE("Cahn-Hilliard Newton converges superlinearly") {
    State s = previous;
    const NewtonResult r =
        newton_solve(SystemKind::ChSubsystem, TimeDisc::SemiImplicit, mesh,
                     prm, src, 1e-3, s, previous, previous, 1e-12, 30);
    REQUIRE(r.residual_history.size() >= 3);
    CHECK(r.final_residual < 1e-12);
    for (std::size_t k = 1; k < r.residual_history.size(); ++k)
      CHECK(r.residual_history[k] < r.residual_history[k - 1]);
    const std::size_t n = r.residual_history.size();
    const double last_ratio = r.residual_history[n - 1] / r.residual_history[n - 2];
    const double first_ratio = r.residual_history[1] / r.residual_history[0];
    CHECK(last_ratio < first_ratio);
    CHECK(last_ratio < 0.1);
  }

  SUBCASE("budget exhaustion throws and restores a finite state") {
    State s = previous;
    CHECK_THROWS_AS(
        newton_solve(SystemKind::ChSubsystem, TimeDisc::SemiImplicit, mesh,
                     prm, src, 1e-3, s, previous, previous, 1e-14, 1),
        NonConvergenceError);
    CHECK(s.finite());
    try {
      State t = previous;
      newton_solve(SystemKind::ChSubsystem, TimeDisc::SemiImplicit, mesh, prm,
                   src, 1e-3, t, previous, previous, 1e-14, 1);
    } catch (const NonConvergenceError& e) {
      CHECK(e.final_residual > 0.0);
    }
  }
}

TEST_CASE("split2 potentials decrease through every half-step") {
  const Mesh mesh = build_mesh(8);
  const MaterialParams prm = MaterialParams::defaults();
  const SourceData src = SourceData::zero(mesh);
  SolverConfig cfg = quick_config(Scheme::Split2, 3);
  cfg.trace_potential = true;

  const RunRecord run = run_simulation(mesh, prm, src, cfg);
  REQUIRE(run.steps.size() == 4);
  CHECK(run.all_converged);
  REQUIRE(run.half_potentials.size() == 3);
  for (std::size_t step = 0; step < 3; ++step) {
    REQUIRE(run.has_initial_potential[step]);
    const auto& seq = run.half_potentials[step];
    // two tracked values per sweep: after the CH half and after the full sweep
    REQUIRE(static_cast<int>(seq.size()) ==
            2 * run.steps[step + 1].outer_iterations);
    double prev = run.initial_potentials[step];
    for (const double h : seq) {
      CHECK(h <= prev + 1e-11 * (1.0 + std::abs(prev)));
      prev = h;
    }
  }
}

TEST_CASE("split3 tracks three potential values per sweep") {
  const Mesh mesh = build_mesh(4);
  const MaterialParams prm = MaterialParams::defaults();
  const SourceData src = SourceData::zero(mesh);
  SolverConfig cfg = quick_config(Scheme::Split3, 2);
  cfg.trace_potential = true;

  const RunRecord run = run_simulation(mesh, prm, src, cfg);
  CHECK(run.all_converged);
  for (std::size_t step = 0; step < 2; ++step) {
    const auto& seq = run.half_potentials[step];
    REQUIRE(static_cast<int>(seq.size()) ==
            3 * run.steps[step + 1].outer_iterations);
    double prev = run.initial_potentials[step];
    for (const double h : seq) {
      CHECK(h <= prev + 1e-11 * (1.0 + std::abs(prev)));
      prev = h;
    }
  }
}

TEST_CASE("schemes agree at tight tolerance") {
  const Mesh mesh = build_mesh(8);
  const MaterialParams prm = MaterialParams::defaults();
  const SourceData src = SourceData::zero(mesh);

  SolverConfig tight = quick_config(Scheme::Split2, 1);
  tight.tol = 1e-14;
  tight.max_iter = 200;
  const RunRecord r2 = run_simulation(mesh, prm, src, tight);
  tight.scheme = Scheme::Split3;
  const RunRecord r3 = run_simulation(mesh, prm, src, tight);
  tight.scheme = Scheme::Mono;
  tight.newton_tol = 1e-12;
  const RunRecord rm = run_simulation(mesh, prm, src, tight);

  REQUIRE(r2.all_converged);
  REQUIRE(r3.all_converged);
  REQUIRE(rm.all_converged);
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    CHECK(r2.final_state.phi[v] ==
          doctest::Approx(rm.final_state.phi[v]).epsilon(1e-7).scale(1.0));
    CHECK(r3.final_state.phi[v] ==
          doctest::Approx(rm.final_state.phi[v]).epsilon(1e-7).scale(1.0));
    CHECK(r2.final_state.p[v] ==
          doctest::Approx(rm.final_state.p[v]).epsilon(1e-7).scale(1.0));
  }
}

TEST_CASE("run_simulation record layout") {
  const Mesh mesh = build_mesh(4);
  const MaterialParams prm = MaterialParams::defaults();
  const SourceData src = SourceData::zero(mesh);
  SolverConfig cfg = quick_config(Scheme::Split2, 3);
  cfg.trace_iterations = true;
  cfg.keep_states = true;

  const RunRecord run = run_simulation(mesh, prm, src, cfg);
  REQUIRE(run.steps.size() == 4);
  CHECK(run.mesh_n == 4);
  CHECK(!run.aborted);
  CHECK(run.error.empty());
  CHECK(run.steps[0].step == 0);
  CHECK(run.steps[0].outer_iterations == 0);
  CHECK(run.steps[2].time == doctest::Approx(2e-3));

  const EnergyBreakdown e0 = free_energy(mesh, initial_state(mesh), prm);
  CHECK(run.steps[0].energy.total == doctest::Approx(e0.total).epsilon(1e-14));
  CHECK(run.steps[0].int_phi ==
        doctest::Approx(integrate(mesh, initial_state(mesh).phi)));

  CHECK(run.steps.back().energy.total < run.steps.front().energy.total);
  REQUIRE(run.traces.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(static_cast<int>(run.traces[k].size()) ==
          run.steps[k + 1].outer_iterations);
    CHECK(run.traces[k].back().increment_norm_sq < cfg.tol);
  }
  REQUIRE(run.states.size() == 3);
  CHECK(run.states.back().phi == run.final_state.phi);
  CHECK(run.total_outer_iterations() ==
        run.steps[1].outer_iterations + run.steps[2].outer_iterations +
            run.steps[3].outer_iterations);
  CHECK(run.int_R == 0.0);
  CHECK(run.int_Sf == 0.0);
}

TEST_CASE("runs are bitwise deterministic") {
  const Mesh mesh = build_mesh(4);
  const MaterialParams prm = MaterialParams::defaults();
  const SourceData src = SourceData::zero(mesh);
  const SolverConfig cfg = quick_config(Scheme::Split2, 2);
  const RunRecord a = run_simulation(mesh, prm, src, cfg);
  const RunRecord b = run_simulation(mesh, prm, src, cfg);
  CHECK(a.final_state.phi == b.final_state.phi);
  CHECK(a.final_state.mu == b.final_state.mu);
  CHECK(a.final_state.ux == b.final_state.ux);
  CHECK(a.final_state.uy == b.final_state.uy);
  CHECK(a.final_state.theta == b.final_state.theta);
  CHECK(a.final_state.p == b.final_state.p);
  CHECK(a.total_outer_iterations() == b.total_outer_iterations());
}

TEST_CASE("outer iteration cap flags steps without aborting") {
  const Mesh mesh = build_mesh(4);
  const MaterialParams prm = MaterialParams::defaults();
  const SourceData src = SourceData::zero(mesh);
  SolverConfig cfg = quick_config(Scheme::Split2, 2);
  cfg.tol = 1e-18;
  cfg.max_iter = 2;

  const RunRecord run = run_simulation(mesh, prm, src, cfg);
  CHECK(!run.aborted);
  CHECK(!run.all_converged);
  CHECK(!run.nonconverged_steps.empty());
  CHECK(run.steps.size() == 3);
  CHECK(run.final_state.finite());
}

TEST_CASE("monolithic scheme smoke run") {
  const Mesh mesh = build_mesh(4);
  const MaterialParams prm = MaterialParams::defaults();
  const SourceData src = SourceData::zero(mesh);
  const SolverConfig cfg = quick_config(Scheme::Mono, 2);
  const RunRecord run = run_simulation(mesh, prm, src, cfg);
  CHECK(run.all_converged);
  CHECK(run.steps[1].outer_iterations > 0);
  CHECK(run.steps.back().energy.total < run.steps.front().energy.total);
}

TEST_CASE("nonzero sources are integrated into the record") {
  const Mesh mesh = build_mesh(4);
  const MaterialParams prm = MaterialParams::defaults();
  SourceData src = SourceData::zero(mesh);
  for (double& v : src.R) v = 1.0;
  const SolverConfig cfg = quick_config(Scheme::Split2, 2);
  const RunRecord run = run_simulation(mesh, prm, src, cfg);
  CHECK(run.int_R == doctest::Approx(1.0).epsilon(1e-13));
  // each step adds tau * int(R) to int(phi)
  CHECK(run.steps[1].int_phi - run.steps[0].int_phi ==
        doctest::Approx(cfg.tau).epsilon(1e-8));
  CHECK(run.steps[2].int_phi - run.steps[1].int_phi ==
        doctest::Approx(cfg.tau).epsilon(1e-8));
}

TEST_CASE("tightly converged steps solve the monolithic system") {
  // once the outer iteration reaches its no-op fixed point, both subsystem
  // residuals sit below newton_tol, so the assembled monolithic residual
  // must as well
  const Mesh mesh = build_mesh(8);
  const MaterialParams prm = MaterialParams::defaults();
  const SourceData src = SourceData::zero(mesh);
  for (Scheme s : {Scheme::Mono, Scheme::Split2, Scheme::Split3}) {
    SolverConfig cfg = quick_config(s, 2);
    cfg.tol = s == Scheme::Mono ? 1e-22 : 1e-26;
    cfg.max_iter = 500;
    cfg.keep_states = true;
    const RunRecord run = run_simulation(mesh, prm, src, cfg);
    REQUIRE(run.all_converged);
    REQUIRE(run.states.size() == 2);
    State prev = initial_state(mesh);
    for (const State& st : run.states) {
      const DenseVector r =
          residual(SystemKind::MonolithicSemiImplicit, TimeDisc::SemiImplicit,
                   mesh, prm, src, cfg.tau, st, prev, prev);
      CHECK(norm_inf(r) <= 10.0 * cfg.newton_tol);
      prev = st;
    }
  }
}

TEST_CASE("a capped split2 step equals one decoupled sweep") {
  const Mesh mesh = build_mesh(4);
  const MaterialParams prm = MaterialParams::defaults();
  const SourceData src = SourceData::zero(mesh);
  SolverConfig cfg = quick_config(Scheme::Split2, 1);
  cfg.max_iter = 1;
  cfg.tol = 1e-18;
  const State previous = initial_state(mesh);
  const StepResult res = step_split2(cfg, mesh, prm, src, previous);
  CHECK_FALSE(res.converged);
  CHECK(res.outer_iterations == 1);

  State manual = previous;
  newton_solve(SystemKind::ChSubsystem, cfg.time_disc, mesh, prm, src, cfg.tau,
               manual, previous, manual, cfg.newton_tol, cfg.newton_max);
  newton_solve(SystemKind::BiotSubsystem, cfg.time_disc, mesh, prm, src,
               cfg.tau, manual, previous, manual, cfg.newton_tol,
               cfg.newton_max);
  CHECK(manual.phi == res.state.phi);
  CHECK(manual.mu == res.state.mu);
  CHECK(manual.ux == res.state.ux);
  CHECK(manual.uy == res.state.uy);
  CHECK(manual.theta == res.state.theta);
  CHECK(manual.p == res.state.p);
}
