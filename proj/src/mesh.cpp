#include "chb/mesh.hpp"

#include <cmath>
#include <stdexcept>

namespace chb {

Mesh build_mesh(int n) {
  if (n < 1) throw std::invalid_argument("build_mesh: n must be >= 1");

  Mesh mesh;
  mesh.n = n;
  mesh.h = std::sqrt(2.0) / n;

  const int nv = (n + 1) * (n + 1);
  mesh.vertices.resize(nv);
  mesh.on_boundary.assign(nv, 0);
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      const int v = mesh.vertex_id(i, j);
      mesh.vertices[v] = {static_cast<double>(i) / n, static_cast<double>(j) / n};
      if (i == 0 || i == n || j == 0 || j == n) mesh.on_boundary[v] = 1;
    }

  mesh.triangles.reserve(2 * n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int v00 = mesh.vertex_id(i, j);
      const int v10 = mesh.vertex_id(i + 1, j);
      const int v01 = mesh.vertex_id(i, j + 1);
      const int v11 = mesh.vertex_id(i + 1, j + 1);
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }

  const int nt = mesh.n_triangles();
  mesh.area.resize(nt);
  mesh.grad.resize(nt);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    const auto& p0 = mesh.vertices[tri[0]];
    const auto& p1 = mesh.vertices[tri[1]];
    const auto& p2 = mesh.vertices[tri[2]];
    const double det =
        (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
    mesh.area[t] = 0.5 * det;
    // grad lambda_k: rotate the opposite edge by 90 degrees / det
    mesh.grad[t][0] = {(p1[1] - p2[1]) / det, (p2[0] - p1[0]) / det};
    mesh.grad[t][1] = {(p2[1] - p0[1]) / det, (p0[0] - p2[0]) / det};
    mesh.grad[t][2] = {(p0[1] - p1[1]) / det, (p1[0] - p0[0]) / det};
  }
  return mesh;
}

std::vector<double> interpolate_indicator(
    const Mesh& mesh, const std::function<bool(double, double)>& inside) {
  std::vector<double> out(mesh.n_vertices());
  for (int v = 0; v < mesh.n_vertices(); ++v)
    out[v] = inside(mesh.vertices[v][0], mesh.vertices[v][1]) ? 1.0 : -1.0;
  return out;
}

}  // namespace chb
