#pragma once

#include <span>
#include <string>
#include <vector>

#include "slafem/config.hpp"
#include "slafem/mesh.hpp"
#include "slafem/mms.hpp"
#include "slafem/sav.hpp"

namespace slafem {

/// CSV with header x,y,phi,theta,ux,uy, one row per node in row-major node
/// order, 17 significant digits (bit-exact round trip).
void write_fields_csv(const State& state, const Mesh& mesh, const std::string& path);

/// VTK legacy ASCII unstructured triangle dataset with POINT_DATA scalars
/// phi, theta and the displacement vector. Byte-stable for equal inputs.
void write_fields_vtk(const State& state, const Mesh& mesh, const std::string& path);

void write_fields(const State& state, const Mesh& mesh, const std::string& path,
                  FieldFormat format);

struct FieldsCsv {
  std::vector<double> x, y, phi, theta, ux, uy;
};
FieldsCsv read_fields_csv(const std::string& path);

/// CSV t,energy,dissipation,identity_residual with the residual
/// E_n - E_{n-1} + D_n computed from consecutive records (0 for the first).
void write_energy_series(std::span<const EnergyRecord> records, const std::string& path);

/// One data file per variable/norm plus a gnuplot script with reference
/// slope-1 and slope-2 guide lines anchored at the coarsest point.
void emit_plots(const ErrorReport& report, const std::string& directory);

void write_error_csv(const ErrorReport& report, const std::string& path);

}  // namespace slafem
