#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace slafem {

/// Uniform conforming triangulation of the unit square (0,1)^dim.
/// dim = 3 is representable in the data model but construction is only
/// implemented for dim = 2.
struct Mesh {
  int dim = 2;
  int n_per_side = 0;
  double h = 0.0;
  std::vector<std::array<double, 2>> nodes;    // row-major by (y, x)
  std::vector<std::array<int, 3>> elements;    // counterclockwise vertex triples
  std::vector<std::uint8_t> is_boundary;       // per-node flag
  std::vector<int> boundary_nodes;             // ascending node indices

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_elements() const { return static_cast<int>(elements.size()); }
  int node_index(int ix, int iy) const { return iy * (n_per_side + 1) + ix; }
};

/// Each square cell is split along the lower-left to upper-right diagonal,
/// the same direction for every cell.
Mesh build_uniform(int n_per_side);

struct InteriorMap {
  std::vector<int> compact_index;  // -1 for boundary nodes
  int n_interior = 0;
};

/// Bijection between non-boundary nodes and 0..n_interior-1, in node order.
InteriorMap interior_index_map(const Mesh& mesh);

}  // namespace slafem
