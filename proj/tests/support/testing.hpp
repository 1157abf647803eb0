#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "slafem/solver.hpp"
#include "slafem/sparse.hpp"

namespace slafem::testing {

using Dense = std::vector<std::vector<double>>;

inline Dense dense_from_sparse(const SparseMatrix& A) {
  Dense D(static_cast<std::size_t>(A.n_rows()),
          std::vector<double>(static_cast<std::size_t>(A.n_cols()), 0.0));
  const auto& offsets = A.row_offsets();
  const auto& cols = A.col_indices();
  const auto& vals = A.values();
  for (int r = 0; r < A.n_rows(); ++r) {
    for (int k = offsets[static_cast<std::size_t>(r)]; k < offsets[static_cast<std::size_t>(r) + 1];
         ++k) {
      D[static_cast<std::size_t>(r)][static_cast<std::size_t>(cols[static_cast<std::size_t>(k)])] =
          vals[static_cast<std::size_t>(k)];
    }
  }
  return D;
}

inline std::vector<double> dense_matvec(const Dense& A, const std::vector<double>& x) {
  std::vector<double> y(A.size(), 0.0);
  for (std::size_t r = 0; r < A.size(); ++r) {
    for (std::size_t c = 0; c < x.size(); ++c) y[r] += A[r][c] * x[c];
  }
  return y;
}

inline std::vector<double> random_vector(int n, std::mt19937& rng, double lo = -1.0,
                                         double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (double& x : v) x = dist(rng);
  return v;
}

// smallest Ritz value after k Lanczos steps with full reorthogonalization;
// the tridiagonal eigenvalue is found by Sturm bisection
inline double lanczos_smallest_ritz(const LinearOperator& A, int steps, std::mt19937& rng) {
  const int n = A.dim();
  steps = std::min(steps, n);
  std::vector<std::vector<double>> V;
  std::vector<double> alpha, beta;

  std::vector<double> v = random_vector(n, rng);
  double norm = norm2(v);
  for (double& x : v) x /= norm;
  V.push_back(v);

  std::vector<double> w(static_cast<std::size_t>(n));
  for (int j = 0; j < steps; ++j) {
    A.apply(V.back(), w);
    const double a = dot(w, V.back());
    alpha.push_back(a);
    axpy(-a, V.back(), w);
    if (V.size() > 1) axpy(-beta.back(), V[V.size() - 2], w);
    for (const auto& vi : V) {  // reorthogonalize
      const double c = dot(w, vi);
      axpy(-c, vi, w);
    }
    const double b = norm2(w);
    if (b < 1e-14) break;
    beta.push_back(b);
    std::vector<double> next = w;
    for (double& x : next) x /= b;
    V.push_back(std::move(next));
  }
  if (!beta.empty()) beta.pop_back();

  const int m = static_cast<int>(alpha.size());
  // Sturm count of eigenvalues below x for the tridiagonal (alpha, beta)
  auto count_below = [&](double x) {
    int count = 0;
    double d = alpha[0] - x;
    if (d < 0) ++count;
    for (int i = 1; i < m; ++i) {
      const double b2 = beta[static_cast<std::size_t>(i - 1)] * beta[static_cast<std::size_t>(i - 1)];
      d = alpha[static_cast<std::size_t>(i)] - x - b2 / (d == 0.0 ? 1e-300 : d);
      if (d < 0) ++count;
    }
    return count;
  };
  double lo = alpha[0], hi = alpha[0];
  for (int i = 0; i < m; ++i) {
    const double bl = i > 0 ? std::abs(beta[static_cast<std::size_t>(i - 1)]) : 0.0;
    const double br = i < m - 1 ? std::abs(beta[static_cast<std::size_t>(i)]) : 0.0;
    lo = std::min(lo, alpha[static_cast<std::size_t>(i)] - bl - br);
    hi = std::max(hi, alpha[static_cast<std::size_t>(i)] + bl + br);
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(mid) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// fourth-order central differences for the residual oracle
inline double fd_dt(const std::function<double(double, double, double)>& f, double x, double y,
                    double t, double h = 1e-3) {
  return (-f(x, y, t + 2 * h) + 8 * f(x, y, t + h) - 8 * f(x, y, t - h) + f(x, y, t - 2 * h)) /
         (12 * h);
}

inline double fd_dxx(const std::function<double(double, double, double)>& f, double x, double y,
                     double t, double h = 1e-3) {
  return (-f(x + 2 * h, y, t) + 16 * f(x + h, y, t) - 30 * f(x, y, t) + 16 * f(x - h, y, t) -
          f(x - 2 * h, y, t)) /
         (12 * h * h);
}

inline double fd_dyy(const std::function<double(double, double, double)>& f, double x, double y,
                     double t, double h = 1e-3) {
  return (-f(x, y + 2 * h, t) + 16 * f(x, y + h, t) - 30 * f(x, y, t) + 16 * f(x, y - h, t) -
          f(x, y - 2 * h, t)) /
         (12 * h * h);
}

inline double fd_dx(const std::function<double(double, double, double)>& f, double x, double y,
                    double t, double h = 1e-3) {
  return (-f(x + 2 * h, y, t) + 8 * f(x + h, y, t) - 8 * f(x - h, y, t) + f(x - 2 * h, y, t)) /
         (12 * h);
}

inline double fd_dy(const std::function<double(double, double, double)>& f, double x, double y,
                    double t, double h = 1e-3) {
  return (-f(x, y + 2 * h, t) + 8 * f(x, y + h, t) - 8 * f(x, y - h, t) + f(x, y - 2 * h, t)) /
         (12 * h);
}

inline double fd_laplacian(const std::function<double(double, double, double)>& f, double x,
                           double y, double t, double h = 1e-3) {
  return fd_dxx(f, x, y, t, h) + fd_dyy(f, x, y, t, h);
}

}  // namespace slafem::testing
