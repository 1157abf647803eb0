#pragma once

#include <array>
#include <string>
#include <vector>

namespace slafem {

enum class SourceKind { none, fixed_gaussian, path_gaussian };

struct PathSegment {
  double t_start = 0.0;
  double t_end = 0.0;
  std::array<double, 2> from{};
  std::array<double, 2> to{};
};

/// Gaussian laser spot, fixed or moving along piecewise-linear segments at
/// constant speed per segment. Segments are closed on the right; at a
/// boundary instant the earlier segment's endpoint is used.
struct SourceSpec {
  SourceKind kind = SourceKind::none;
  double intensity = 0.0;       // peak intensity I_m
  double width = 1.0;           // beam width w0
  std::array<double, 2> center{0.5, 0.5};
  std::vector<PathSegment> waypoints;
};

/// Violations of the spec invariants (ranges, segment ordering, coverage of
/// [0, t_final]); empty when valid.
std::vector<std::string> validate_source(const SourceSpec& spec, double t_final);

std::array<double, 2> source_center(const SourceSpec& spec, double t);
double evaluate(const SourceSpec& spec, double x, double y, double t);

/// Three-stroke trajectory converging on the domain center, covering [0,1].
SourceSpec y_path(double intensity, double width);

}  // namespace slafem
