#include "slafem/elasticity.hpp"

#include <stdexcept>

namespace slafem {

ElasticSystem assemble_elastic_system(const FemSpace& space, const ModelParams& params,
                                      const MaterialLaws& laws, std::span<const double> phi,
                                      std::span<const double> theta,
                                      std::span<const double> theta0,
                                      std::span<const double> body_load) {
  const int n_nodes = space.n_dofs;
  if (static_cast<int>(phi.size()) != n_nodes || static_cast<int>(theta.size()) != n_nodes ||
      static_cast<int>(theta0.size()) != n_nodes) {
    throw std::invalid_argument("assemble_elastic_system: field size mismatch");
  }
  if (!body_load.empty() && static_cast<int>(body_load.size()) != 2 * n_nodes) {
    throw std::invalid_argument("assemble_elastic_system: body load size mismatch");
  }

  if (space.mesh.dim != 2) {
    throw std::invalid_argument("assemble_elastic_system: only dim 2 is implemented");
  }

  ElasticSystem system;
  system.dof_map = interior_index_map(space.mesh);
  const int n_dofs = 2 * system.dof_map.n_interior;
  system.F.assign(static_cast<std::size_t>(n_dofs), 0.0);

  const Voigt3 C1 = gel_elasticity_tensor_2d(params);
  const LameConstants lame = lame_constants(params.young_modulus, params.poisson_ratio);
  const double trace_coeff = 2.0 * lame.lambda + 2.0 * lame.mu;  // C1 I acting on a scalar strain

  // nodal coefficient and load scalar, both P1-interpolated in the integrals
  std::vector<double> coeff(static_cast<std::size_t>(n_nodes));
  std::vector<double> g(static_cast<std::size_t>(n_nodes));
  for (int i = 0; i < n_nodes; ++i) {
    const std::size_t s = static_cast<std::size_t>(i);
    const double c = params.kappa + laws.k(phi[s]) * (1.0 - params.kappa);
    coeff[s] = c;
    g[s] = c * (laws.m(phi[s]) - params.beta * (theta[s] - theta0[s]));
  }

  std::vector<Triplet> triplets;
  triplets.reserve(space.elements.size() * 36);

  for (const auto& geom : space.elements) {
    const double c_avg = (coeff[static_cast<std::size_t>(geom.nodes[0])] +
                          coeff[static_cast<std::size_t>(geom.nodes[1])] +
                          coeff[static_cast<std::size_t>(geom.nodes[2])]) /
                         3.0;
    const double g_avg = (g[static_cast<std::size_t>(geom.nodes[0])] +
                          g[static_cast<std::size_t>(geom.nodes[1])] +
                          g[static_cast<std::size_t>(geom.nodes[2])]) /
                         3.0;

    // B_i = [[gx, 0], [0, gy], [gy/2, gx/2]] per vertex; strains constant
    std::array<std::array<std::array<double, 2>, 3>, 3> B{};
    for (int i = 0; i < 3; ++i) {
      const double gx = geom.grad[static_cast<std::size_t>(i)][0];
      const double gy = geom.grad[static_cast<std::size_t>(i)][1];
      B[static_cast<std::size_t>(i)] = {{{gx, 0.0}, {0.0, gy}, {0.5 * gy, 0.5 * gx}}};
    }

    for (int i = 0; i < 3; ++i) {
      const int node_i = geom.nodes[static_cast<std::size_t>(i)];
      const int ii = system.dof_map.compact_index[static_cast<std::size_t>(node_i)];
      if (ii < 0) continue;
      // load: (C1 I) double-dot strain of the dof = trace_coeff * d(chi)/dx_a
      for (int a = 0; a < 2; ++a) {
        system.F[static_cast<std::size_t>(2 * ii + a)] +=
            geom.area * g_avg * trace_coeff *
            geom.grad[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)];
      }
      for (int j = 0; j < 3; ++j) {
        const int node_j = geom.nodes[static_cast<std::size_t>(j)];
        const int jj = system.dof_map.compact_index[static_cast<std::size_t>(node_j)];
        if (jj < 0) continue;
        for (int a = 0; a < 2; ++a) {
          for (int b = 0; b < 2; ++b) {
            double v = 0.0;
            for (int r = 0; r < 3; ++r) {
              for (int s = 0; s < 3; ++s) {
                v += B[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)]
                      [static_cast<std::size_t>(a)] *
                     C1[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)] *
                     B[static_cast<std::size_t>(j)][static_cast<std::size_t>(s)]
                      [static_cast<std::size_t>(b)];
              }
            }
            triplets.push_back({2 * ii + a, 2 * jj + b, geom.area * c_avg * v});
          }
        }
      }
    }
  }

  // the body load handed in is already a load vector (M times nodal values)
  if (!body_load.empty()) {
    for (int node = 0; node < n_nodes; ++node) {
      const int ii = system.dof_map.compact_index[static_cast<std::size_t>(node)];
      if (ii < 0) continue;
      system.F[static_cast<std::size_t>(2 * ii)] += body_load[static_cast<std::size_t>(2 * node)];
      system.F[static_cast<std::size_t>(2 * ii + 1)] +=
          body_load[static_cast<std::size_t>(2 * node + 1)];
    }
  }

  system.K = SparseMatrix::from_triplets(n_dofs, n_dofs, std::move(triplets));
  return system;
}

std::vector<double> solve_displacement(const ElasticSystem& system, const SolverConfig& config,
                                       std::span<const double> warm_start) {
  const int n_nodes = static_cast<int>(system.dof_map.compact_index.size());
  std::vector<double> full(static_cast<std::size_t>(2 * n_nodes), 0.0);
  if (system.dof_map.n_interior == 0) return full;

  std::vector<double> x0;
  if (!warm_start.empty()) {
    if (static_cast<int>(warm_start.size()) != 2 * n_nodes) {
      throw std::invalid_argument("solve_displacement: warm start size mismatch");
    }
    x0.assign(static_cast<std::size_t>(2 * system.dof_map.n_interior), 0.0);
    for (int node = 0; node < n_nodes; ++node) {
      const int ii = system.dof_map.compact_index[static_cast<std::size_t>(node)];
      if (ii < 0) continue;
      x0[static_cast<std::size_t>(2 * ii)] = warm_start[static_cast<std::size_t>(2 * node)];
      x0[static_cast<std::size_t>(2 * ii + 1)] = warm_start[static_cast<std::size_t>(2 * node + 1)];
    }
  }

  CgResult r = cg_solve(make_operator(system.K), system.F, config, x0);
  for (int node = 0; node < n_nodes; ++node) {
    const int ii = system.dof_map.compact_index[static_cast<std::size_t>(node)];
    if (ii < 0) continue;
    full[static_cast<std::size_t>(2 * node)] = r.x[static_cast<std::size_t>(2 * ii)];
    full[static_cast<std::size_t>(2 * node + 1)] = r.x[static_cast<std::size_t>(2 * ii + 1)];
  }
  return full;
}

}  // namespace slafem
