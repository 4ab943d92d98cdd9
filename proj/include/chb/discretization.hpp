#pragma once

#include <span>

#include "chb/linalg.hpp"
#include "chb/mesh.hpp"
#include "chb/physics.hpp"
#include "chb/state.hpp"

namespace chb {

// Which discrete system a residual/Jacobian call assembles. The monolithic
// kinds fix their own time discretization; the subsystem kinds are used by
// the splitting schemes and take the TimeDisc argument.
enum class SystemKind {
  MonolithicSemiImplicit,
  MonolithicImplicit,
  ChSubsystem,
  BiotSubsystem,
  ElasticityOnly,
  FlowOnly,
};

enum class TimeDisc { SemiImplicit, Implicit };

// Unknown ordering is blocked by field: all phi, then mu, then u_x, u_y,
// theta, p (restricted to the fields the kind owns).
int system_size(SystemKind kind, const Mesh& mesh);
DenseVector extract_unknowns(SystemKind kind, const State& s);
void inject_unknowns(SystemKind kind, std::span<const double> x, State& s);

// phi = -1 on the left half (x <= 0.5), +1 on the right; everything else 0.
State initial_state(const Mesh& mesh);

// Residual and Jacobian of the chosen system at `current`, with `previous`
// the converged previous time step and `lagged` supplying the frozen fields
// of the splitting iteration (ignored by the monolithic kinds). Displacement
// boundary conditions are homogeneous Dirichlet, imposed by row/column
// elimination with identity diagonal; boundary displacement values in
// `current` are masked to zero inside the weak form, and the constraint rows
// return the raw nodal value, so the Jacobian is the exact derivative of the
// residual for arbitrary inputs.
DenseVector residual(SystemKind kind, TimeDisc disc, const Mesh& mesh,
                     const MaterialParams& prm, const SourceData& src,
                     double tau, const State& current, const State& previous,
                     const State& lagged, Exec exec = default_exec());

SparseMatrix jacobian(SystemKind kind, TimeDisc disc, const Mesh& mesh,
                      const MaterialParams& prm, const SourceData& src,
                      double tau, const State& current, const State& previous,
                      const State& lagged, Exec exec = default_exec());

// Scalar P1 operators on the mesh.
SparseMatrix assemble_mass_matrix(const Mesh& mesh);
SparseMatrix assemble_stiffness_matrix(const Mesh& mesh, double coefficient);
DenseVector lumped_mass_vector(const Mesh& mesh);

// Exact integral of a P1 nodal field (the lumped weights are exact for P1).
double integrate(const Mesh& mesh, std::span<const double> nodal);

}  // namespace chb
