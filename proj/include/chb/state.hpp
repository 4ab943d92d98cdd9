#pragma once

#include <vector>

#include "chb/mesh.hpp"

namespace chb {

// Nodal fields of the coupled model: phase field, chemical potential,
// displacement components, fluid content, pressure. All P1 on the same mesh.
struct State {
  std::vector<double> phi, mu, ux, uy, theta, p;

  static State zero(const Mesh& mesh) { return zero(mesh.n_vertices()); }
  static State zero(int n_vertices) {
    State s;
    s.phi.assign(n_vertices, 0.0);
    s.mu.assign(n_vertices, 0.0);
    s.ux.assign(n_vertices, 0.0);
    s.uy.assign(n_vertices, 0.0);
    s.theta.assign(n_vertices, 0.0);
    s.p.assign(n_vertices, 0.0);
    return s;
  }
  int n_vertices() const { return static_cast<int>(phi.size()); }
  bool finite() const;
};

}  // namespace chb
