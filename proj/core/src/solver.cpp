#include "slafem/solver.hpp"

#include <cmath>
#include <utility>

namespace slafem {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

LinearOperator::LinearOperator(int dim, ApplyFn apply) : dim_(dim), apply_(std::move(apply)) {}

void LinearOperator::apply(std::span<const double> x, std::span<double> y) const {
  if (static_cast<int>(x.size()) != dim_ || static_cast<int>(y.size()) != dim_) {
    throw std::invalid_argument("LinearOperator::apply: dimension mismatch");
  }
  apply_(x, y);
}

std::vector<double> LinearOperator::operator()(std::span<const double> x) const {
  std::vector<double> y(static_cast<std::size_t>(dim_));
  apply(x, y);
  return y;
}

LinearOperator& LinearOperator::with_diagonal(std::vector<double> diag) {
  diagonal_ = std::move(diag);
  return *this;
}

LinearOperator make_operator(std::shared_ptr<const SparseMatrix> A) {
  const int n = A->n_rows();
  LinearOperator op(n, [A](std::span<const double> x, std::span<double> y) { A->multiply(x, y); });
  op.with_diagonal(A->diagonal());
  return op;
}

LinearOperator make_operator(SparseMatrix A) {
  return make_operator(std::make_shared<const SparseMatrix>(std::move(A)));
}

LinearOperator operator_sum(std::vector<std::pair<double, LinearOperator>> terms) {
  if (terms.empty()) throw std::invalid_argument("operator_sum: empty term list");
  const int n = terms.front().second.dim();
  std::vector<double> diag(static_cast<std::size_t>(n), 0.0);
  bool have_diag = true;
  for (const auto& [c, op] : terms) {
    if (op.dim() != n) throw std::invalid_argument("operator_sum: dimension mismatch");
    if (op.diagonal().empty()) {
      have_diag = false;
    } else if (have_diag) {
      for (int i = 0; i < n; ++i) {
        diag[static_cast<std::size_t>(i)] += c * op.diagonal()[static_cast<std::size_t>(i)];
      }
    }
  }
  auto shared = std::make_shared<std::vector<std::pair<double, LinearOperator>>>(std::move(terms));
  LinearOperator op(n, [shared, n](std::span<const double> x, std::span<double> y) {
    std::vector<double> tmp(static_cast<std::size_t>(n));
    std::fill(y.begin(), y.end(), 0.0);
    for (const auto& [c, term] : *shared) {
      term.apply(x, tmp);
      axpy(c, tmp, y);
    }
  });
  if (have_diag) op.with_diagonal(std::move(diag));
  return op;
}

LinearOperator inverse_operator(LinearOperator A, SolverConfig inner_config) {
  const int n = A.dim();
  auto shared = std::make_shared<LinearOperator>(std::move(A));
  return LinearOperator(n, [shared, inner_config](std::span<const double> x, std::span<double> y) {
    CgResult r = cg_solve(*shared, x, inner_config);
    std::copy(r.x.begin(), r.x.end(), y.begin());
  });
}

LinearOperator rank_one_update(LinearOperator A, std::vector<double> u, std::vector<double> v,
                               double scale) {
  const int n = A.dim();
  if (static_cast<int>(u.size()) != n || static_cast<int>(v.size()) != n) {
    throw std::invalid_argument("rank_one_update: dimension mismatch");
  }
  std::vector<double> diag;
  if (!A.diagonal().empty()) {
    diag = A.diagonal();
    for (int i = 0; i < n; ++i) {
      diag[static_cast<std::size_t>(i)] +=
          scale * u[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
    }
  }
  auto base = std::make_shared<LinearOperator>(std::move(A));
  auto us = std::make_shared<std::vector<double>>(std::move(u));
  auto vs = std::make_shared<std::vector<double>>(std::move(v));
  LinearOperator op(n, [base, us, vs, scale](std::span<const double> x, std::span<double> y) {
    base->apply(x, y);
    const double vx = dot(*vs, x);
    axpy(scale * vx, *us, y);
  });
  if (!diag.empty()) op.with_diagonal(std::move(diag));
  return op;
}

SolverError::SolverError(const std::string& what, double achieved_residual, int iterations)
    : std::runtime_error(what), achieved_residual_(achieved_residual), iterations_(iterations) {}

CgResult cg_solve(const LinearOperator& A, std::span<const double> b, const SolverConfig& config,
                  std::span<const double> x0) {
  return cg_solve(A, b, config, x0, LinearOperator{});
}

CgResult cg_solve(const LinearOperator& A, std::span<const double> b, const SolverConfig& config,
                  std::span<const double> x0, const LinearOperator& preconditioner) {
  const int n = A.dim();
  if (static_cast<int>(b.size()) != n) {
    throw std::invalid_argument("cg_solve: right-hand side dimension mismatch");
  }
  if (!x0.empty() && static_cast<int>(x0.size()) != n) {
    throw std::invalid_argument("cg_solve: initial guess dimension mismatch");
  }

  const bool use_operator = preconditioner.dim() == n;
  const bool use_jacobi = !use_operator &&
                          config.preconditioner == Preconditioner::jacobi &&
                          !A.diagonal().empty();
  std::vector<double> inv_diag;
  if (use_jacobi) {
    inv_diag.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const double d = A.diagonal()[static_cast<std::size_t>(i)];
      inv_diag[static_cast<std::size_t>(i)] = d != 0.0 ? 1.0 / d : 1.0;
    }
  }

  CgResult result;
  result.x.assign(static_cast<std::size_t>(n), 0.0);
  if (!x0.empty()) std::copy(x0.begin(), x0.end(), result.x.begin());

  const double b_norm = norm2(b);
  if (b_norm == 0.0) {
    std::fill(result.x.begin(), result.x.end(), 0.0);
    return result;
  }

  std::vector<double> r(static_cast<std::size_t>(n));
  A.apply(result.x, r);
  for (int i = 0; i < n; ++i) {
    r[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)] - r[static_cast<std::size_t>(i)];
  }

  auto precondition = [&](const std::vector<double>& in, std::vector<double>& out) {
    if (use_operator) {
      preconditioner.apply(in, out);
    } else if (use_jacobi) {
      for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] =
            inv_diag[static_cast<std::size_t>(i)] * in[static_cast<std::size_t>(i)];
      }
    } else {
      out = in;
    }
  };

  std::vector<double> z(static_cast<std::size_t>(n));
  precondition(r, z);
  std::vector<double> p = z;
  std::vector<double> Ap(static_cast<std::size_t>(n));
  double rz = dot(r, z);
  double r_norm = norm2(r);

  for (int iter = 0; iter < config.max_iterations; ++iter) {
    if (r_norm <= config.rel_tolerance * b_norm) {
      result.iterations = iter;
      result.relative_residual = r_norm / b_norm;
      return result;
    }
    A.apply(p, Ap);
    const double pAp = dot(p, Ap);
    if (pAp <= 0.0) {
      throw SolverError("cg_solve: operator is not positive definite (p'Ap <= 0)",
                        r_norm / b_norm, iter);
    }
    const double alpha = rz / pAp;
    axpy(alpha, p, result.x);
    axpy(-alpha, Ap, r);
    precondition(r, z);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    for (int i = 0; i < n; ++i) {
      p[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)] +
                                       beta * p[static_cast<std::size_t>(i)];
    }
    rz = rz_new;
    r_norm = norm2(r);
  }

  if (r_norm <= config.rel_tolerance * b_norm) {
    result.iterations = config.max_iterations;
    result.relative_residual = r_norm / b_norm;
    return result;
  }
  throw SolverError("cg_solve: no convergence within " + std::to_string(config.max_iterations) +
                        " iterations (relative residual " + std::to_string(r_norm / b_norm) + ")",
                    r_norm / b_norm, config.max_iterations);
}

}  // namespace slafem
