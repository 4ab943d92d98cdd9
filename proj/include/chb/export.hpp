#pragma once

#include <string>

#include "chb/mesh.hpp"
#include "chb/state.hpp"

namespace chb {

enum class ExportFormat { Csv, VtkLegacy };

// Writes nodal fields. CSV: header "x,y,phi,mu,theta,p,ux,uy", one row per
// vertex, full double precision. VTK: legacy 2.0 ASCII unstructured grid
// with scalar point data phi, mu, theta, p and vector field displacement.
void export_fields(const Mesh& mesh, const State& state,
                   const std::string& path, ExportFormat format);

}  // namespace chb
