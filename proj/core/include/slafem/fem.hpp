#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "slafem/mesh.hpp"
#include "slafem/solver.hpp"
#include "slafem/sparse.hpp"

namespace slafem {

/// Scalar function of space with an optional analytic gradient (needed by
/// the Ritz projection).
struct ScalarField {
  std::function<double(double, double)> value;
  std::function<std::array<double, 2>(double, double)> gradient;  // may be null
};

ScalarField constant_field(double c);

struct ElementGeometry {
  std::array<int, 3> nodes;
  double area;
  std::array<std::array<double, 2>, 3> grad;  // hat-function gradients, constant per element
};

/// P1 space on a triangulation: one degree of freedom per node.
struct FemSpace {
  Mesh mesh;
  int n_dofs = 0;
  std::vector<ElementGeometry> elements;
};

FemSpace make_space(Mesh mesh);

/// Barycentric quadrature on the reference triangle; weights sum to 1 and
/// integrals are weights-dot-values times the element area.
struct QuadratureRule {
  int order = 0;  // polynomial exactness degree
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;

  static const QuadratureRule& triangle(int order);  // order in 1..5
};

SparseMatrix assemble_mass(const FemSpace& space);
SparseMatrix assemble_stiffness(const FemSpace& space);
/// P_ij = integral of I_h(w) chi_i chi_j with w given by nodal values
/// (exact closed-form local integration).
SparseMatrix assemble_weighted_mass(const FemSpace& space, std::span<const double> w);

std::vector<double> nodal_interpolate(const FemSpace& space,
                                      const std::function<double(double, double)>& f);

/// Load vector of the P1 interpolant with the given nodal values: M * nodal.
std::vector<double> load_from_nodal(const SparseMatrix& M, std::span<const double> nodal);
std::vector<double> load_from_function(const FemSpace& space, const SparseMatrix& M,
                                       const std::function<double(double, double, double)>& f,
                                       double t);

/// Ritz projection R_h f: (grad(f - R_h f), grad psi_h) = 0 with the mean of
/// f preserved. The singular Neumann system is solved by CG on the
/// zero-mean complement.
std::vector<double> ritz_project(const FemSpace& space, const ScalarField& f,
                                 const SolverConfig& config);

/// Solves M y = -S f.
std::vector<double> discrete_laplacian(const SparseMatrix& M, const SparseMatrix& S,
                                       std::span<const double> f, const SolverConfig& config);

struct FieldNorms {
  double l2 = 0.0;
  double h1_semi = 0.0;
  double linf = 0.0;
};

FieldNorms norms(const SparseMatrix& M, const SparseMatrix& S, std::span<const double> f);

/// Elementwise quadrature of an arbitrary function of (x, y).
double integrate(const FemSpace& space, const std::function<double(double, double)>& f,
                 int quad_order);
/// Elementwise quadrature of fn composed with the P1 function given by nodal
/// values; exact when fn(linear) has degree <= quad_order.
double integrate_composed(const FemSpace& space, std::span<const double> nodal,
                          const std::function<double(double)>& fn, int quad_order);
/// L2 distance between the P1 function with the given nodal values and a
/// smooth function, by elementwise quadrature.
double l2_distance(const FemSpace& space, std::span<const double> nodal,
                   const std::function<double(double, double)>& f, int quad_order);

}  // namespace slafem
