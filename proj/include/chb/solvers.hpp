#pragma once

#include <string>
#include <vector>

#include "chb/discretization.hpp"
#include "chb/mesh.hpp"
#include "chb/physics.hpp"
#include "chb/state.hpp"

namespace chb {

enum class Scheme { Mono, Split2, Split3 };

struct SolverConfig {
  Scheme scheme = Scheme::Split2;
  TimeDisc time_disc = TimeDisc::SemiImplicit;
  double tau = 1e-3;
  int n_steps = 100;
  double tol = 1e-6;        // outer incremental stopping tolerance
  int max_iter = 100;       // outer iteration cap
  double newton_tol = 1e-10;
  int newton_max = 50;
  bool trace_iterations = false;
  bool trace_potential = false;
  bool keep_states = false;

  static SolverConfig defaults() { return SolverConfig{}; }
  void validate() const;  // throws std::invalid_argument
};

struct IterationTrace {
  double increment_norm_sq = 0.0;
  double potential = 0.0;
  bool has_potential = false;
};

struct StepResult {
  State state;
  int outer_iterations = 0;
  bool converged = false;
  std::vector<IterationTrace> trace;
  // Potential values after each half-step (Split2) or third (Split3), in
  // solve order; empty unless tracing is enabled.
  std::vector<double> half_potentials;
  double initial_potential = 0.0;
  bool has_initial_potential = false;
};

// Incremental stopping criterion: consistent-mass L2 norms of the phi, u
// and p increments (theta and mu excluded).
std::pair<bool, double> stopping_test(const Mesh& mesh, const State& prev_iterate,
                                      const State& curr_iterate, double tol);

struct NewtonResult {
  int iterations = 0;
  double final_residual = 0.0;
  std::vector<double> residual_history;  // infinity norms, includes initial
};

// Plain Newton (full steps, no damping) on the chosen system. `state` holds
// the initial guess and is updated in place; `lagged` may alias `state`.
// Returns immediately with 0 iterations if the initial residual already
// meets newton_tol. On budget exhaustion or a non-finite iterate the best
// iterate seen is restored and NonConvergenceError is thrown.
NewtonResult newton_solve(SystemKind kind, TimeDisc disc, const Mesh& mesh,
                          const MaterialParams& params, const SourceData& sources,
                          double tau, State& state, const State& previous,
                          const State& lagged, double newton_tol, int newton_max);

// One time step under each strategy. Monolithic Newton counts Newton
// iterations; the splits count outer coupling iterations (sweeps) only.
// The incremental stopping test governs convergence in all three.
StepResult step_monolithic(const SolverConfig& cfg, const Mesh& mesh,
                           const MaterialParams& params,
                           const SourceData& sources, const State& previous);
StepResult step_split2(const SolverConfig& cfg, const Mesh& mesh,
                       const MaterialParams& params, const SourceData& sources,
                       const State& previous);
StepResult step_split3(const SolverConfig& cfg, const Mesh& mesh,
                       const MaterialParams& params, const SourceData& sources,
                       const State& previous);

struct StepRow {
  int step = 0;
  double time = 0.0;
  EnergyBreakdown energy;
  int outer_iterations = 0;
  bool converged = true;
  double wall_seconds = 0.0;
  double int_phi = 0.0, int_theta = 0.0;
};

struct RunRecord {
  SolverConfig config;
  MaterialParams params;
  int mesh_n = 0;
  std::vector<StepRow> steps;  // includes the step-0 row
  // Per time step (index 0 = step 1) when trace_iterations or
  // trace_potential is set.
  std::vector<std::vector<IterationTrace>> traces;
  std::vector<double> initial_potentials;
  std::vector<char> has_initial_potential;
  std::vector<std::vector<double>> half_potentials;
  std::vector<State> states;  // per time step when keep_states is set
  State final_state;
  bool all_converged = true;
  std::vector<int> nonconverged_steps;
  double wall_total = 0.0;
  double int_R = 0.0, int_Sf = 0.0;  // lumped source integrals
  bool aborted = false;              // hard failure; record is partial
  std::string error;

  int total_outer_iterations() const;
};

// Sequential time stepping from initial_state. Non-converged steps are
// flagged and the best iterate is carried forward; hard failures (singular
// matrix, I/O-level errors) stop the loop and leave a partial record with
// `aborted` set. Wall time wraps only the stepping loop.
RunRecord run_simulation(const Mesh& mesh, const MaterialParams& params,
                         const SourceData& sources, const SolverConfig& cfg);

}  // namespace chb
