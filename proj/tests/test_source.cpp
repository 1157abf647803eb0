#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "slafem/mesh.hpp"
#include "slafem/source.hpp"

using namespace slafem;

TEST_SUITE("source") {

TEST_CASE("fixed gaussian peaks at its center") {
  SourceSpec spec;
  spec.kind = SourceKind::fixed_gaussian;
  spec.intensity = 4.0e4;
  spec.width = 0.015;
  spec.center = {0.5, 0.5};
  CHECK(evaluate(spec, 0.5, 0.5, 0.3) == doctest::Approx(4.0e4).epsilon(1e-15));
  CHECK(evaluate(spec, 0.5 + 0.015, 0.5, 0.3) ==
        doctest::Approx(4.0e4 * std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("kind none is identically zero") {
  SourceSpec spec;
  CHECK(evaluate(spec, 0.2, 0.9, 0.1) == 0.0);
}

TEST_CASE("y path waypoints") {
  const SourceSpec spec = y_path(4.0e4, 0.015);
  const auto at = [&](double t) { return source_center(spec, t); };
  CHECK(at(0.0)[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(at(0.0)[1] == doctest::Approx(5.0 / 6).epsilon(1e-15));
  // boundary instant: the earlier segment's endpoint wins
  CHECK(at(1.0 / 3)[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(at(1.0 / 3)[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(at(0.5)[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(at(0.5)[1] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(at(1.0)[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(at(1.0)[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("time outside the path coverage throws") {
  const SourceSpec spec = y_path(1.0, 0.1);
  CHECK_THROWS_AS(evaluate(spec, 0.5, 0.5, 1.5), std::domain_error);
  CHECK_THROWS_AS(evaluate(spec, 0.5, 0.5, -0.5), std::domain_error);
}

TEST_CASE("radial symmetry about the instantaneous center") {
  const SourceSpec spec = y_path(2.0e3, 0.05);
  for (double t : {0.1, 0.45, 0.9}) {
    const auto c = source_center(spec, t);
    for (const auto& r : {std::array<double, 2>{0.07, 0.02}, std::array<double, 2>{-0.03, 0.11}}) {
      const double plus = evaluate(spec, c[0] + r[0], c[1] + r[1], t);
      const double minus = evaluate(spec, c[0] - r[0], c[1] - r[1], t);
      CHECK(std::abs(plus - minus) <= 1e-14 * std::max(1.0, plus));
    }
  }
}

TEST_CASE("grid maximum sits at the node nearest the center") {
  SourceSpec spec;
  spec.kind = SourceKind::fixed_gaussian;
  spec.intensity = 10.0;
  spec.width = 0.2;
  spec.center = {0.52, 0.48};
  const Mesh mesh = build_uniform(10);
  int argmax = 0;
  double best = -1.0;
  int nearest = 0;
  double nearest_dist = 1e30;
  for (int i = 0; i < mesh.n_nodes(); ++i) {
    const auto& p = mesh.nodes[static_cast<std::size_t>(i)];
    const double v = evaluate(spec, p[0], p[1], 0.0);
    if (v > best) {
      best = v;
      argmax = i;
    }
    const double d = std::hypot(p[0] - 0.52, p[1] - 0.48);
    if (d < nearest_dist) {
      nearest_dist = d;
      nearest = i;
    }
  }
  CHECK(argmax == nearest);
}

TEST_CASE("validation catches bad paths") {
  SourceSpec spec = y_path(1.0, 0.1);
  CHECK(validate_source(spec, 1.0).empty());
  CHECK(!validate_source(spec, 2.0).empty());  // window extends past coverage

  SourceSpec gap = spec;
  gap.waypoints[1].t_start = 0.4;  // leaves (1/3, 0.4) uncovered
  CHECK(!validate_source(gap, 1.0).empty());

  SourceSpec bad_width = spec;
  bad_width.width = 0.0;
  CHECK(!validate_source(bad_width, 1.0).empty());
}

}  // TEST_SUITE
