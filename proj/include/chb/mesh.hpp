#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace chb {

// Structured P1 triangulation of the unit square: n x n grid cells, each
// split along its lower-left -> upper-right diagonal into two CCW triangles.
// h is the longest edge (the cell diagonal).
struct Mesh {
  int n = 0;
  double h = 0.0;
  std::vector<std::array<double, 2>> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::uint8_t> on_boundary;

  // Precomputed element geometry: area and the constant gradients of the
  // three barycentric basis functions.
  std::vector<double> area;
  std::vector<std::array<std::array<double, 2>, 3>> grad;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }
  int vertex_id(int i, int j) const { return j * (n + 1) + i; }
};

Mesh build_mesh(int n);

// Nodal indicator: +1 at vertices where inside(x, y) is true, -1 elsewhere.
std::vector<double> interpolate_indicator(
    const Mesh& mesh, const std::function<bool(double, double)>& inside);

}  // namespace chb
