#pragma once

#include <span>
#include <vector>

#include "slafem/fem.hpp"
#include "slafem/model.hpp"

namespace slafem {

/// Quasi-static elasticity system over interior displacement DOFs
/// (2 per interior node, interleaved x then y).
struct ElasticSystem {
  SparseMatrix K;
  std::vector<double> F;
  InteriorMap dof_map;
};

/// Assembles (I_h(C(phi)) E(u), E(v)) = (I_h(g) C1 I, E(v)) [+ body load]
/// with the coefficient kappa + k(phi)(1-kappa) and the load scalar
/// g = coeff * (m(phi) - beta (theta - theta0)) evaluated nodewise and
/// P1-interpolated; element integrals are exact (one-third nodal average).
/// body_load, when nonempty, is a full-length (2 n_nodes) vector load added
/// to F on interior DOFs.
ElasticSystem assemble_elastic_system(const FemSpace& space, const ModelParams& params,
                                      const MaterialLaws& laws, std::span<const double> phi,
                                      std::span<const double> theta,
                                      std::span<const double> theta0,
                                      std::span<const double> body_load = {});

/// CG solve scattered back to a full node vector with zero boundary values.
/// warm_start, when nonempty, is a full-length displacement vector.
std::vector<double> solve_displacement(const ElasticSystem& system, const SolverConfig& config,
                                       std::span<const double> warm_start = {});

}  // namespace slafem
