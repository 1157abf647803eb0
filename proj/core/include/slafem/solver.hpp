#pragma once

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "slafem/sparse.hpp"

namespace slafem {

enum class Preconditioner { none, jacobi };

struct SolverConfig {
  double rel_tolerance = 1e-10;
  int max_iterations = 10000;
  Preconditioner preconditioner = Preconditioner::jacobi;
};

/// Abstract linear map with a declared dimension. Concrete instances are
/// built with the factories below; all of them are value types sharing
/// immutable state, safe to copy and to apply concurrently.
class LinearOperator {
 public:
  using ApplyFn = std::function<void(std::span<const double>, std::span<double>)>;

  LinearOperator() = default;
  LinearOperator(int dim, ApplyFn apply);

  int dim() const { return dim_; }
  void apply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> operator()(std::span<const double> x) const;

  /// Diagonal used by the Jacobi preconditioner; empty when unknown.
  const std::vector<double>& diagonal() const { return diagonal_; }
  LinearOperator& with_diagonal(std::vector<double> diag);

 private:
  int dim_ = 0;
  ApplyFn apply_;
  std::vector<double> diagonal_;
};

LinearOperator make_operator(SparseMatrix A);
LinearOperator make_operator(std::shared_ptr<const SparseMatrix> A);
/// sum_i coefficients[i] * terms[i]
LinearOperator operator_sum(std::vector<std::pair<double, LinearOperator>> terms);
/// x -> A^{-1} x realized by an inner CG solve (A SPD).
LinearOperator inverse_operator(LinearOperator A, SolverConfig inner_config);
/// x -> A x + scale * (v . x) u
LinearOperator rank_one_update(LinearOperator A, std::vector<double> u,
                               std::vector<double> v, double scale);

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double achieved_residual, int iterations);
  double achieved_residual() const { return achieved_residual_; }
  int iterations() const { return iterations_; }

 private:
  double achieved_residual_;
  int iterations_;
};

struct CgResult {
  std::vector<double> x;
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Preconditioned conjugate gradients for SPD operators. Converges to
/// ||b - A x|| <= rel_tolerance * ||b||; throws SolverError (carrying the
/// achieved residual) when max_iterations is exhausted.
CgResult cg_solve(const LinearOperator& A, std::span<const double> b,
                  const SolverConfig& config, std::span<const double> x0 = {});

/// CG with an explicit SPD preconditioner applying z = P^{-1} r; used where
/// a problem-structure inverse is available (the phase-block solve).
CgResult cg_solve(const LinearOperator& A, std::span<const double> b,
                  const SolverConfig& config, std::span<const double> x0,
                  const LinearOperator& preconditioner);

// small vector helpers shared across modules
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
void axpy(double alpha, std::span<const double> x, std::span<double> y);  // y += alpha x

}  // namespace slafem
