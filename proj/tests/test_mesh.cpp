#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "slafem/fem.hpp"
#include "slafem/mesh.hpp"

using namespace slafem;

TEST_SUITE("mesh") {

TEST_CASE("smallest meshes have the expected counts") {
  const Mesh m1 = build_uniform(1);
  CHECK(m1.n_nodes() == 4);
  CHECK(m1.n_elements() == 2);
  CHECK(m1.boundary_nodes.size() == 4);

  const Mesh m2 = build_uniform(2);
  CHECK(m2.n_nodes() == 9);
  CHECK(m2.n_elements() == 8);
  CHECK(m2.boundary_nodes.size() == 8);
}

TEST_CASE("paper-scale mesh size") {
  const Mesh m = build_uniform(400);
  CHECK(m.h == doctest::Approx(0.0025).epsilon(1e-15));
  CHECK(m.n_nodes() == 160801);
  CHECK(m.n_elements() == 2 * 400 * 400);
}

TEST_CASE("rejects n_per_side zero") {
  CHECK_THROWS_AS(build_uniform(0), std::invalid_argument);
}

TEST_CASE("element areas and orientation") {
  const int n = 7;
  const Mesh mesh = build_uniform(n);
  const double expected = 0.5 * mesh.h * mesh.h;
  double total = 0.0;
  for (const auto& elem : mesh.elements) {
    const auto& a = mesh.nodes[static_cast<std::size_t>(elem[0])];
    const auto& b = mesh.nodes[static_cast<std::size_t>(elem[1])];
    const auto& c = mesh.nodes[static_cast<std::size_t>(elem[2])];
    const double signed_area =
        0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
    CHECK(signed_area == doctest::Approx(expected).epsilon(1e-13));
    total += signed_area;
  }
  CHECK(std::abs(total - 1.0) <= 1e-12);
  CHECK(mesh.n_nodes() == (n + 1) * (n + 1));
  CHECK(mesh.n_elements() == 2 * n * n);
}

TEST_CASE("boundary flag matches coordinates") {
  const Mesh mesh = build_uniform(5);
  for (int i = 0; i < mesh.n_nodes(); ++i) {
    const auto& p = mesh.nodes[static_cast<std::size_t>(i)];
    const bool on_edge = std::abs(p[0]) < 1e-14 || std::abs(p[0] - 1.0) < 1e-14 ||
                         std::abs(p[1]) < 1e-14 || std::abs(p[1] - 1.0) < 1e-14;
    CHECK(static_cast<bool>(mesh.is_boundary[static_cast<std::size_t>(i)]) == on_edge);
  }
}

TEST_CASE("interior index map counts") {
  CHECK(interior_index_map(build_uniform(1)).n_interior == 0);
  CHECK(interior_index_map(build_uniform(2)).n_interior == 1);
  CHECK(interior_index_map(build_uniform(4)).n_interior == 9);

  const Mesh mesh = build_uniform(4);
  const InteriorMap map = interior_index_map(mesh);
  std::set<int> seen;
  for (int i = 0; i < mesh.n_nodes(); ++i) {
    const int c = map.compact_index[static_cast<std::size_t>(i)];
    if (mesh.is_boundary[static_cast<std::size_t>(i)]) {
      CHECK(c == -1);
    } else {
      CHECK(c >= 0);
      CHECK(c < map.n_interior);
      CHECK(seen.insert(c).second);
    }
  }
  CHECK(static_cast<int>(seen.size()) == map.n_interior);
}

TEST_CASE("partition of unity at random points") {
  const FemSpace space = make_space(build_uniform(6));
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto& geom = space.elements[static_cast<std::size_t>(
        std::uniform_int_distribution<int>(0, static_cast<int>(space.elements.size()) - 1)(rng))];
    // random point inside the element
    double r = dist(rng), s = dist(rng);
    if (r + s > 1.0) {
      r = 1.0 - r;
      s = 1.0 - s;
    }
    const auto& a = space.mesh.nodes[static_cast<std::size_t>(geom.nodes[0])];
    const auto& b = space.mesh.nodes[static_cast<std::size_t>(geom.nodes[1])];
    const auto& c = space.mesh.nodes[static_cast<std::size_t>(geom.nodes[2])];
    const double px = a[0] + r * (b[0] - a[0]) + s * (c[0] - a[0]);
    const double py = a[1] + r * (b[1] - a[1]) + s * (c[1] - a[1]);
    // hat value i at (px, py): affine with gradient geom.grad[i], value 1 at node i
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) {
      const auto& node = space.mesh.nodes[static_cast<std::size_t>(geom.nodes[static_cast<std::size_t>(i)])];
      const double value = 1.0 + geom.grad[static_cast<std::size_t>(i)][0] * (px - node[0]) +
                           geom.grad[static_cast<std::size_t>(i)][1] * (py - node[1]);
      sum += value;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-13);  // three hats sum to 1
  }
}

TEST_CASE("interior edges are shared by exactly two elements") {
  const Mesh mesh = build_uniform(5);
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& elem : mesh.elements) {
    for (int k = 0; k < 3; ++k) {
      int a = elem[static_cast<std::size_t>(k)];
      int b = elem[static_cast<std::size_t>((k + 1) % 3)];
      if (a > b) std::swap(a, b);
      ++edge_count[{a, b}];
    }
  }
  for (const auto& [edge, count] : edge_count) {
    const bool both_boundary = mesh.is_boundary[static_cast<std::size_t>(edge.first)] &&
                               mesh.is_boundary[static_cast<std::size_t>(edge.second)];
    if (count == 1) {
      CHECK(both_boundary);
    } else {
      CHECK(count == 2);
    }
  }
}

}  // TEST_SUITE
