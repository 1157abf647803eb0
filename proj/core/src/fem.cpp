#include "slafem/fem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace slafem {

ScalarField constant_field(double c) {
  return ScalarField{[c](double, double) { return c; },
                     [](double, double) { return std::array<double, 2>{0.0, 0.0}; }};
}

FemSpace make_space(Mesh mesh) {
  FemSpace space;
  space.mesh = std::move(mesh);
  space.n_dofs = space.mesh.n_nodes();
  space.elements.reserve(space.mesh.elements.size());
  for (const auto& elem : space.mesh.elements) {
    const auto& p0 = space.mesh.nodes[static_cast<std::size_t>(elem[0])];
    const auto& p1 = space.mesh.nodes[static_cast<std::size_t>(elem[1])];
    const auto& p2 = space.mesh.nodes[static_cast<std::size_t>(elem[2])];
    const double det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
    if (det <= 0.0) throw std::invalid_argument("make_space: element not counterclockwise");
    ElementGeometry geom;
    geom.nodes = elem;
    geom.area = 0.5 * det;
    // grad of hat i: rotated opposite edge over det
    geom.grad[0] = {(p1[1] - p2[1]) / det, (p2[0] - p1[0]) / det};
    geom.grad[1] = {(p2[1] - p0[1]) / det, (p0[0] - p2[0]) / det};
    geom.grad[2] = {(p0[1] - p1[1]) / det, (p1[0] - p0[0]) / det};
    space.elements.push_back(geom);
  }
  return space;
}

const QuadratureRule& QuadratureRule::triangle(int order) {
  static const QuadratureRule deg1{1, {{{1.0 / 3, 1.0 / 3, 1.0 / 3}}}, {1.0}};
  static const QuadratureRule deg2{2,
                                   {{{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}}},
                                   {1.0 / 3, 1.0 / 3, 1.0 / 3}};
  static const QuadratureRule deg3{
      3,
      {{{1.0 / 3, 1.0 / 3, 1.0 / 3},
        {0.6, 0.2, 0.2},
        {0.2, 0.6, 0.2},
        {0.2, 0.2, 0.6}}},
      {-27.0 / 48, 25.0 / 48, 25.0 / 48, 25.0 / 48}};
  static const QuadratureRule deg4 = [] {
    QuadratureRule q;
    q.order = 4;
    const double a1 = 0.108103018168070, b1 = 0.445948490915965, w1 = 0.223381589678011;
    const double a2 = 0.816847572980459, b2 = 0.091576213509771, w2 = 0.109951743655322;
    q.points = {{{a1, b1, b1}, {b1, a1, b1}, {b1, b1, a1},
                 {a2, b2, b2}, {b2, a2, b2}, {b2, b2, a2}}};
    q.weights = {w1, w1, w1, w2, w2, w2};
    return q;
  }();
  static const QuadratureRule deg5 = [] {
    QuadratureRule q;
    q.order = 5;
    const double a1 = 0.059715871789770, b1 = 0.470142064105115, w1 = 0.132394152788506;
    const double a2 = 0.797426985353087, b2 = 0.101286507323456, w2 = 0.125939180544827;
    q.points = {{{1.0 / 3, 1.0 / 3, 1.0 / 3},
                 {a1, b1, b1}, {b1, a1, b1}, {b1, b1, a1},
                 {a2, b2, b2}, {b2, a2, b2}, {b2, b2, a2}}};
    q.weights = {9.0 / 40, w1, w1, w1, w2, w2, w2};
    return q;
  }();
  switch (order) {
    case 1: return deg1;
    case 2: return deg2;
    case 3: return deg3;
    case 4: return deg4;
    case 5: return deg5;
    default: throw std::invalid_argument("QuadratureRule::triangle: order must be in 1..5");
  }
}

namespace {

std::array<double, 2> barycentric_point(const FemSpace& space, const ElementGeometry& geom,
                                        const std::array<double, 3>& lambda) {
  const auto& n = space.mesh.nodes;
  const auto& a = n[static_cast<std::size_t>(geom.nodes[0])];
  const auto& b = n[static_cast<std::size_t>(geom.nodes[1])];
  const auto& c = n[static_cast<std::size_t>(geom.nodes[2])];
  return {lambda[0] * a[0] + lambda[1] * b[0] + lambda[2] * c[0],
          lambda[0] * a[1] + lambda[1] * b[1] + lambda[2] * c[1]};
}

}  // namespace

SparseMatrix assemble_mass(const FemSpace& space) {
  std::vector<Triplet> triplets;
  triplets.reserve(space.elements.size() * 9);
  for (const auto& geom : space.elements) {
    const double s = geom.area / 12.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        triplets.push_back({geom.nodes[static_cast<std::size_t>(i)],
                            geom.nodes[static_cast<std::size_t>(j)],
                            (i == j ? 2.0 : 1.0) * s});
      }
    }
  }
  return SparseMatrix::from_triplets(space.n_dofs, space.n_dofs, std::move(triplets));
}

SparseMatrix assemble_stiffness(const FemSpace& space) {
  std::vector<Triplet> triplets;
  triplets.reserve(space.elements.size() * 9);
  for (const auto& geom : space.elements) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const double v = geom.area * (geom.grad[static_cast<std::size_t>(i)][0] *
                                          geom.grad[static_cast<std::size_t>(j)][0] +
                                      geom.grad[static_cast<std::size_t>(i)][1] *
                                          geom.grad[static_cast<std::size_t>(j)][1]);
        triplets.push_back({geom.nodes[static_cast<std::size_t>(i)],
                            geom.nodes[static_cast<std::size_t>(j)], v});
      }
    }
  }
  return SparseMatrix::from_triplets(space.n_dofs, space.n_dofs, std::move(triplets));
}

SparseMatrix assemble_weighted_mass(const FemSpace& space, std::span<const double> w) {
  if (static_cast<int>(w.size()) != space.n_dofs) {
    throw std::invalid_argument("assemble_weighted_mass: weight vector size mismatch");
  }
  std::vector<Triplet> triplets;
  triplets.reserve(space.elements.size() * 9);
  for (const auto& geom : space.elements) {
    const double w0 = w[static_cast<std::size_t>(geom.nodes[0])];
    const double w1 = w[static_cast<std::size_t>(geom.nodes[1])];
    const double w2 = w[static_cast<std::size_t>(geom.nodes[2])];
    const double w_total = w0 + w1 + w2;
    const std::array<double, 3> wn{w0, w1, w2};
    // exact integrals of chi_i chi_j chi_k: A/10 (all equal), A/30 (two
    // equal), A/60 (distinct)
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        double v;
        if (i == j) {
          v = geom.area * (2.0 * wn[static_cast<std::size_t>(i)] + w_total) / 30.0;
        } else {
          v = geom.area *
              (wn[static_cast<std::size_t>(i)] + wn[static_cast<std::size_t>(j)] + w_total) / 60.0;
        }
        triplets.push_back({geom.nodes[static_cast<std::size_t>(i)],
                            geom.nodes[static_cast<std::size_t>(j)], v});
      }
    }
  }
  return SparseMatrix::from_triplets(space.n_dofs, space.n_dofs, std::move(triplets));
}

std::vector<double> nodal_interpolate(const FemSpace& space,
                                      const std::function<double(double, double)>& f) {
  std::vector<double> v(static_cast<std::size_t>(space.n_dofs));
  for (int i = 0; i < space.n_dofs; ++i) {
    const auto& p = space.mesh.nodes[static_cast<std::size_t>(i)];
    v[static_cast<std::size_t>(i)] = f(p[0], p[1]);
  }
  return v;
}

std::vector<double> load_from_nodal(const SparseMatrix& M, std::span<const double> nodal) {
  return M.multiply(nodal);
}

std::vector<double> load_from_function(const FemSpace& space, const SparseMatrix& M,
                                       const std::function<double(double, double, double)>& f,
                                       double t) {
  std::vector<double> nodal(static_cast<std::size_t>(space.n_dofs));
  for (int i = 0; i < space.n_dofs; ++i) {
    const auto& p = space.mesh.nodes[static_cast<std::size_t>(i)];
    nodal[static_cast<std::size_t>(i)] = f(p[0], p[1], t);
  }
  return M.multiply(nodal);
}

std::vector<double> ritz_project(const FemSpace& space, const ScalarField& f,
                                 const SolverConfig& config) {
  if (!f.value || !f.gradient) {
    throw std::invalid_argument("ritz_project: field needs value and gradient");
  }
  const int n = space.n_dofs;
  const QuadratureRule& quad = QuadratureRule::triangle(4);

  // rhs_k = (grad f, grad chi_k), elementwise with constant hat gradients
  std::vector<double> rhs(static_cast<std::size_t>(n), 0.0);
  double f_mean = 0.0;
  for (const auto& geom : space.elements) {
    double gx = 0.0, gy = 0.0;
    for (std::size_t q = 0; q < quad.points.size(); ++q) {
      const auto p = barycentric_point(space, geom, quad.points[q]);
      const auto g = f.gradient(p[0], p[1]);
      gx += quad.weights[q] * g[0];
      gy += quad.weights[q] * g[1];
      f_mean += geom.area * quad.weights[q] * f.value(p[0], p[1]);
    }
    for (int i = 0; i < 3; ++i) {
      rhs[static_cast<std::size_t>(geom.nodes[static_cast<std::size_t>(i)])] +=
          geom.area * (gx * geom.grad[static_cast<std::size_t>(i)][0] +
                       gy * geom.grad[static_cast<std::size_t>(i)][1]);
    }
  }

  // deflate the constant kernel: solve (P S P) y = P rhs on the zero-mean
  // complement, P the Euclidean mean projector
  auto subtract_mean = [n](std::span<double> v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    for (double& x : v) x -= mean;
  };
  subtract_mean(rhs);

  SparseMatrix S = assemble_stiffness(space);
  std::vector<double> diag = S.diagonal();
  auto shared = std::make_shared<const SparseMatrix>(std::move(S));
  LinearOperator projected(n, [shared, subtract_mean, n](std::span<const double> x,
                                                         std::span<double> y) {
    std::vector<double> xc(x.begin(), x.end());
    subtract_mean(xc);
    shared->multiply(xc, y);
    subtract_mean(y);
  });
  projected.with_diagonal(std::move(diag));

  CgResult r = cg_solve(projected, rhs, config);
  subtract_mean(r.x);

  // restore the mean of f (|Omega| = 1): int R_h f = (M 1)' x + c
  SparseMatrix M = assemble_mass(space);
  std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
  const double current = dot(M.multiply(ones), r.x);
  const double c = f_mean - current;
  for (double& x : r.x) x += c;
  return r.x;
}

std::vector<double> discrete_laplacian(const SparseMatrix& M, const SparseMatrix& S,
                                       std::span<const double> f, const SolverConfig& config) {
  std::vector<double> rhs = S.multiply(f);
  for (double& v : rhs) v = -v;
  return cg_solve(make_operator(M), rhs, config).x;
}

FieldNorms norms(const SparseMatrix& M, const SparseMatrix& S, std::span<const double> f) {
  FieldNorms out;
  out.l2 = std::sqrt(std::max(0.0, dot(M.multiply(f), f)));
  out.h1_semi = std::sqrt(std::max(0.0, dot(S.multiply(f), f)));
  for (double v : f) out.linf = std::max(out.linf, std::abs(v));
  return out;
}

double integrate(const FemSpace& space, const std::function<double(double, double)>& f,
                 int quad_order) {
  const QuadratureRule& quad = QuadratureRule::triangle(quad_order);
  double total = 0.0;
  for (const auto& geom : space.elements) {
    double local = 0.0;
    for (std::size_t q = 0; q < quad.points.size(); ++q) {
      const auto p = barycentric_point(space, geom, quad.points[q]);
      local += quad.weights[q] * f(p[0], p[1]);
    }
    total += geom.area * local;
  }
  return total;
}

double integrate_composed(const FemSpace& space, std::span<const double> nodal,
                          const std::function<double(double)>& fn, int quad_order) {
  if (static_cast<int>(nodal.size()) != space.n_dofs) {
    throw std::invalid_argument("integrate_composed: nodal vector size mismatch");
  }
  const QuadratureRule& quad = QuadratureRule::triangle(quad_order);
  double total = 0.0;
  for (const auto& geom : space.elements) {
    const double v0 = nodal[static_cast<std::size_t>(geom.nodes[0])];
    const double v1 = nodal[static_cast<std::size_t>(geom.nodes[1])];
    const double v2 = nodal[static_cast<std::size_t>(geom.nodes[2])];
    double local = 0.0;
    for (std::size_t q = 0; q < quad.points.size(); ++q) {
      const auto& l = quad.points[q];
      local += quad.weights[q] * fn(l[0] * v0 + l[1] * v1 + l[2] * v2);
    }
    total += geom.area * local;
  }
  return total;
}

double l2_distance(const FemSpace& space, std::span<const double> nodal,
                   const std::function<double(double, double)>& f, int quad_order) {
  const QuadratureRule& quad = QuadratureRule::triangle(quad_order);
  double total = 0.0;
  for (const auto& geom : space.elements) {
    const double v0 = nodal[static_cast<std::size_t>(geom.nodes[0])];
    const double v1 = nodal[static_cast<std::size_t>(geom.nodes[1])];
    const double v2 = nodal[static_cast<std::size_t>(geom.nodes[2])];
    double local = 0.0;
    for (std::size_t q = 0; q < quad.points.size(); ++q) {
      const auto& l = quad.points[q];
      const auto p = barycentric_point(space, geom, quad.points[q]);
      const double diff = l[0] * v0 + l[1] * v1 + l[2] * v2 - f(p[0], p[1]);
      local += quad.weights[q] * diff * diff;
    }
    total += geom.area * local;
  }
  return std::sqrt(std::max(0.0, total));
}

}  // namespace slafem
