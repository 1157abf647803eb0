#include "slafem/source.hpp"

#include <cmath>
#include <stdexcept>

namespace slafem {

std::vector<std::string> validate_source(const SourceSpec& spec, double t_final) {
  std::vector<std::string> issues;
  if (spec.kind == SourceKind::none) return issues;
  if (spec.intensity < 0.0) issues.emplace_back("source intensity must be >= 0");
  if (spec.width <= 0.0) issues.emplace_back("source width must be > 0");
  if (spec.kind == SourceKind::path_gaussian) {
    if (spec.waypoints.empty()) {
      issues.emplace_back("path source needs at least one segment");
      return issues;
    }
    for (std::size_t i = 0; i < spec.waypoints.size(); ++i) {
      const auto& seg = spec.waypoints[i];
      if (!(seg.t_start < seg.t_end)) {
        issues.emplace_back("path segment " + std::to_string(i) + " has t_start >= t_end");
      }
      if (i > 0 && std::abs(seg.t_start - spec.waypoints[i - 1].t_end) > 1e-12) {
        issues.emplace_back("path segments " + std::to_string(i - 1) + " and " +
                            std::to_string(i) + " overlap or leave a gap");
      }
    }
    if (spec.waypoints.front().t_start > 1e-12) {
      issues.emplace_back("path does not cover t = 0");
    }
    if (spec.waypoints.back().t_end < t_final - 1e-12) {
      issues.emplace_back("path does not cover the simulation window up to t_final");
    }
  }
  return issues;
}

std::array<double, 2> source_center(const SourceSpec& spec, double t) {
  if (spec.kind == SourceKind::fixed_gaussian || spec.kind == SourceKind::none) {
    return spec.center;
  }
  if (t < spec.waypoints.front().t_start - 1e-12 ||
      t > spec.waypoints.back().t_end + 1e-12) {
    throw std::domain_error("source_center: t outside path coverage");
  }
  // segments are closed on the right: at a boundary instant the earlier
  // segment's endpoint wins
  for (const auto& seg : spec.waypoints) {
    if (t <= seg.t_end + 1e-15) {
      double f = (t - seg.t_start) / (seg.t_end - seg.t_start);
      f = std::min(1.0, std::max(0.0, f));
      return {seg.from[0] + f * (seg.to[0] - seg.from[0]),
              seg.from[1] + f * (seg.to[1] - seg.from[1])};
    }
  }
  return spec.waypoints.back().to;
}

double evaluate(const SourceSpec& spec, double x, double y, double t) {
  if (spec.kind == SourceKind::none) return 0.0;
  const auto c = source_center(spec, t);
  const double dx = x - c[0];
  const double dy = y - c[1];
  return spec.intensity * std::exp(-(dx * dx + dy * dy) / (spec.width * spec.width));
}

SourceSpec y_path(double intensity, double width) {
  SourceSpec spec;
  spec.kind = SourceKind::path_gaussian;
  spec.intensity = intensity;
  spec.width = width;
  spec.waypoints = {
      {0.0, 1.0 / 3, {0.25, 5.0 / 6}, {0.5, 0.5}},
      {1.0 / 3, 2.0 / 3, {0.5, 1.0 / 6}, {0.5, 0.5}},
      {2.0 / 3, 1.0, {0.75, 5.0 / 6}, {0.5, 0.5}},
  };
  return spec;
}

}  // namespace slafem
