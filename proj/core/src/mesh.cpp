#include "slafem/mesh.hpp"

#include <stdexcept>

namespace slafem {

Mesh build_uniform(int n_per_side) {
  if (n_per_side < 1) {
    throw std::invalid_argument("build_uniform: n_per_side must be >= 1");
  }
  Mesh mesh;
  mesh.dim = 2;
  mesh.n_per_side = n_per_side;
  mesh.h = 1.0 / n_per_side;

  const int n = n_per_side;
  mesh.nodes.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  mesh.is_boundary.reserve(mesh.nodes.capacity());
  for (int iy = 0; iy <= n; ++iy) {
    for (int ix = 0; ix <= n; ++ix) {
      mesh.nodes.push_back({static_cast<double>(ix) / n, static_cast<double>(iy) / n});
      const bool boundary = ix == 0 || ix == n || iy == 0 || iy == n;
      mesh.is_boundary.push_back(boundary ? 1 : 0);
      if (boundary) mesh.boundary_nodes.push_back(mesh.node_index(ix, iy));
    }
  }

  // split each cell along the lower-left to upper-right diagonal, ccw
  mesh.elements.reserve(static_cast<std::size_t>(2) * n * n);
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const int p00 = mesh.node_index(ix, iy);
      const int p10 = mesh.node_index(ix + 1, iy);
      const int p01 = mesh.node_index(ix, iy + 1);
      const int p11 = mesh.node_index(ix + 1, iy + 1);
      mesh.elements.push_back({p00, p10, p11});
      mesh.elements.push_back({p00, p11, p01});
    }
  }
  return mesh;
}

InteriorMap interior_index_map(const Mesh& mesh) {
  InteriorMap map;
  map.compact_index.assign(mesh.nodes.size(), -1);
  for (int i = 0; i < mesh.n_nodes(); ++i) {
    if (!mesh.is_boundary[static_cast<std::size_t>(i)]) {
      map.compact_index[static_cast<std::size_t>(i)] = map.n_interior++;
    }
  }
  return map;
}

}  // namespace slafem
