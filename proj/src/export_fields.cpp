#include "chb/export.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace chb {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const Mesh& mesh, const State& s, std::ofstream& out) {
  out << "x,y,phi,mu,theta,p,ux,uy\n";
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    out << fmt(mesh.vertices[v][0]) << ',' << fmt(mesh.vertices[v][1]) << ','
        << fmt(s.phi[v]) << ',' << fmt(s.mu[v]) << ',' << fmt(s.theta[v])
        << ',' << fmt(s.p[v]) << ',' << fmt(s.ux[v]) << ',' << fmt(s.uy[v])
        << '\n';
  }
}

void write_vtk(const Mesh& mesh, const State& s, std::ofstream& out) {
  const int nv = mesh.n_vertices();
  const int nt = mesh.n_triangles();
  out << "# vtk DataFile Version 2.0\n";
  out << "chb fields\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << nv << " double\n";
  for (int v = 0; v < nv; ++v)
    out << fmt(mesh.vertices[v][0]) << ' ' << fmt(mesh.vertices[v][1])
        << " 0\n";
  out << "CELLS " << nt << ' ' << 4 * nt << '\n';
  for (int t = 0; t < nt; ++t)
    out << "3 " << mesh.triangles[t][0] << ' ' << mesh.triangles[t][1] << ' '
        << mesh.triangles[t][2] << '\n';
  out << "CELL_TYPES " << nt << '\n';
  for (int t = 0; t < nt; ++t) out << "5\n";
  out << "POINT_DATA " << nv << '\n';
  const struct {
    const char* name;
    const std::vector<double>* data;
  } scalars[] = {{"phi", &s.phi}, {"mu", &s.mu}, {"theta", &s.theta},
                 {"p", &s.p}};
  for (const auto& sc : scalars) {
    out << "SCALARS " << sc.name << " double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (int v = 0; v < nv; ++v) out << fmt((*sc.data)[v]) << '\n';
  }
  out << "VECTORS displacement double\n";
  for (int v = 0; v < nv; ++v)
    out << fmt(s.ux[v]) << ' ' << fmt(s.uy[v]) << " 0\n";
}

}  // namespace

void export_fields(const Mesh& mesh, const State& state,
                   const std::string& path, ExportFormat format) {
  if (state.n_vertices() != mesh.n_vertices())
    throw std::invalid_argument("export_fields: size mismatch");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  if (format == ExportFormat::Csv)
    write_csv(mesh, state, out);
  else
    write_vtk(mesh, state, out);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace chb
