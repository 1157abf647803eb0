#include "slafem/sav.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace slafem {

namespace {

// partial-pivot LU for the dense monolithic cross-validation path
std::vector<double> dense_lu_solve(std::vector<double> A, std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  auto at = [&](int r, int c) -> double& {
    return A[static_cast<std::size_t>(r) * static_cast<std::size_t>(n) +
             static_cast<std::size_t>(c)];
  };
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    double best = std::abs(at(col, col));
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(at(r, col)) > best) {
        best = std::abs(at(r, col));
        pivot = r;
      }
    }
    if (best == 0.0) throw std::runtime_error("dense_lu_solve: singular matrix");
    if (pivot != col) {
      for (int c = 0; c < n; ++c) std::swap(at(pivot, c), at(col, c));
      std::swap(b[static_cast<std::size_t>(pivot)], b[static_cast<std::size_t>(col)]);
    }
    for (int r = col + 1; r < n; ++r) {
      const double f = at(r, col) / at(col, col);
      at(r, col) = 0.0;
      if (f == 0.0) continue;
      for (int c = col + 1; c < n; ++c) at(r, c) -= f * at(col, c);
      b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
    }
  }
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int r = n - 1; r >= 0; --r) {
    double sum = b[static_cast<std::size_t>(r)];
    for (int c = r + 1; c < n; ++c) sum -= at(r, c) * x[static_cast<std::size_t>(c)];
    x[static_cast<std::size_t>(r)] = sum / at(r, r);
  }
  return x;
}

void add_dense_sparse_block(std::vector<double>& A, int n_total, int row0, int col0,
                            const SparseMatrix& B, double scale) {
  const auto& offsets = B.row_offsets();
  const auto& cols = B.col_indices();
  const auto& vals = B.values();
  for (int r = 0; r < B.n_rows(); ++r) {
    for (int k = offsets[static_cast<std::size_t>(r)];
         k < offsets[static_cast<std::size_t>(r) + 1]; ++k) {
      A[static_cast<std::size_t>(row0 + r) * static_cast<std::size_t>(n_total) +
        static_cast<std::size_t>(col0 + cols[static_cast<std::size_t>(k)])] +=
          scale * vals[static_cast<std::size_t>(k)];
    }
  }
}

void add_dense_diag_block(std::vector<double>& A, int n_total, int row0, int col0,
                          std::span<const double> diag, double scale) {
  for (int i = 0; i < static_cast<int>(diag.size()); ++i) {
    A[static_cast<std::size_t>(row0 + i) * static_cast<std::size_t>(n_total) +
      static_cast<std::size_t>(col0 + i)] += scale * diag[static_cast<std::size_t>(i)];
  }
}

std::vector<double> map_nodal(const std::vector<double>& v,
                              const std::function<double(double)>& fn) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = fn(v[i]);
  return out;
}

std::vector<double> scale_by(const std::vector<double>& diag, std::span<const double> x) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = diag[i] * x[i];
  return out;
}

}  // namespace

int step_count(double t_final, double tau) {
  if (tau <= 0.0 || t_final <= 0.0) {
    throw std::invalid_argument("step_count: tau and t_final must be positive");
  }
  const double ratio = t_final / tau;
  const int n = static_cast<int>(std::llround(ratio));
  if (n < 1 || std::abs(n * tau - t_final) > 1e-9 * std::max(1.0, t_final)) {
    throw std::invalid_argument("step_count: t_final must be an integer multiple of tau");
  }
  return n;
}

SavSolver::SavSolver(const FemSpace& space, ModelParams params, MaterialLaws laws,
                     SolverConfig config, StepAlgorithm algorithm)
    : space_(space),
      params_(std::move(params)),
      laws_(std::move(laws)),
      config_(config),
      algorithm_(algorithm),
      M_(std::make_shared<const SparseMatrix>(assemble_mass(space))),
      S_(std::make_shared<const SparseMatrix>(assemble_stiffness(space))) {
  std::vector<double> ones(static_cast<std::size_t>(space.n_dofs), 1.0);
  ml_ = M_->multiply(ones);
}

double SavSolver::q_of(std::span<const double> phi) const {
  const double w_integral = integrate_composed(space_, phi, laws_.W, 4);
  const double q_sq = w_integral / params_.epsilon + 1.0;
  if (q_sq < 1.0 - 1e-12) {
    throw std::runtime_error("SavSolver: Q_h < 1, the W quadrature is broken");
  }
  return std::sqrt(q_sq);
}

double SavSolver::energy(std::span<const double> phi, std::span<const double> theta,
                         double q) const {
  const double grad_phi_sq = dot(S_->multiply(phi), phi);
  double theta_sq = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double shifted = theta[i] - params_.theta_c;
    theta_sq += ml_[i] * shifted * shifted;
  }
  return 0.5 * params_.lambda * params_.epsilon * grad_phi_sq + params_.lambda * q * q +
         0.5 * params_.delta * theta_sq;
}

std::vector<double> SavSolver::source_load(
    const std::function<double(double, double, double)>& f, double t) const {
  std::vector<double> load(static_cast<std::size_t>(space_.n_dofs));
  for (int i = 0; i < space_.n_dofs; ++i) {
    const auto& p = space_.mesh.nodes[static_cast<std::size_t>(i)];
    load[static_cast<std::size_t>(i)] = ml_[static_cast<std::size_t>(i)] * f(p[0], p[1], t);
  }
  return load;
}

void SavSolver::check_state(const State& state) const {
  const std::size_t n = static_cast<std::size_t>(space_.n_dofs);
  if (state.phi.size() != n || state.theta.size() != n) {
    throw std::invalid_argument("SavSolver: state field sizes inconsistent with the mesh");
  }
}

State SavSolver::initialize(const ScalarField& phi0, const ScalarField& theta0, InitMode mode,
                            const StepLoads& loads_at_zero) const {
  State state;
  state.t = 0.0;
  if (mode == InitMode::ritz) {
    state.phi = ritz_project(space_, phi0, config_);
    state.theta = ritz_project(space_, theta0, config_);
  } else {
    state.phi = nodal_interpolate(space_, phi0.value);
    state.theta = nodal_interpolate(space_, theta0.value);
  }
  state.theta0 = state.theta;
  state.q = q_of(state.phi);

  ElasticSystem system = assemble_elastic_system(space_, params_, laws_, state.phi, state.theta,
                                                 state.theta0, loads_at_zero.body_load);
  state.u = solve_displacement(system, config_);
  return state;
}

std::pair<State, EnergyRecord> SavSolver::step(const State& state, double tau,
                                               const StepLoads& loads,
                                               const StepOptions& options) const {
  if (tau <= 0.0) throw std::invalid_argument("SavSolver::step: tau must be positive");
  check_state(state);
  if (algorithm_ == StepAlgorithm::monolithic) {
    return step_monolithic(state, tau, loads, options);
  }
  return step_elimination(state, tau, loads, options);
}

std::pair<State, EnergyRecord> SavSolver::step_elimination(const State& state, double tau,
                                                           const StepLoads& loads,
                                                           const StepOptions& options) const {
  const int n = space_.n_dofs;
  const ModelParams& pr = params_;

  const double Q_prev = q_of(state.phi);
  std::vector<double> b = map_nodal(state.phi, laws_.W_prime);
  for (double& v : b) v *= pr.lambda / (pr.epsilon * Q_prev);
  const std::vector<double> Mb = scale_by(ml_, b);

  // lumped coupling: P acts as multiplication by ml .* p(phi)
  const std::vector<double> p_nodal = map_nodal(state.phi, laws_.p);
  auto pl = std::make_shared<std::vector<double>>(scale_by(ml_, p_nodal));

  SolverConfig inner = config_;
  inner.rel_tolerance = 0.01 * config_.rel_tolerance;

  // theta block A = delta Ml + tau S
  auto ml = std::make_shared<std::vector<double>>(ml_);
  auto S_local = S_;
  const double delta = pr.delta;
  LinearOperator A_theta(
      n, [ml, S_local, delta, tau](std::span<const double> x, std::span<double> y) {
        S_local->multiply(x, y);
        for (std::size_t i = 0; i < x.size(); ++i) {
          y[i] = delta * (*ml)[i] * x[i] + tau * y[i];
        }
      });
  {
    std::vector<double> diag = S_->diagonal();
    for (int i = 0; i < n; ++i) {
      diag[static_cast<std::size_t>(i)] =
          delta * ml_[static_cast<std::size_t>(i)] + tau * diag[static_cast<std::size_t>(i)];
    }
    A_theta.with_diagonal(std::move(diag));
  }
  auto A_inv = std::make_shared<LinearOperator>(inverse_operator(A_theta, inner));

  // w = A^{-1}(delta Ml theta - gamma P phi + tau heat)
  std::vector<double> w_rhs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const std::size_t s = static_cast<std::size_t>(i);
    w_rhs[s] = delta * ml_[s] * state.theta[s] - pr.gamma * (*pl)[s] * state.phi[s];
  }
  if (!loads.heat_load.empty()) axpy(tau, loads.heat_load, w_rhs);
  const std::span<const double> theta_guess =
      options.zero_initial_guess ? std::span<const double>{}
                                 : std::span<const double>(state.theta);
  std::vector<double> w = cg_solve(A_theta, w_rhs, inner, theta_guess).x;

  // X = alpha Ml + lambda eps tau S + tau gamma^2 P A^{-1} P
  const double alpha = pr.alpha;
  const double visc = pr.lambda * pr.epsilon * tau;
  const double coup = tau * pr.gamma * pr.gamma;
  LinearOperator X(n, [ml, pl, S_local, A_inv, alpha, visc, coup,
                       n](std::span<const double> x, std::span<double> y) {
    std::vector<double> t1(static_cast<std::size_t>(n));
    std::vector<double> t2(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < t1.size(); ++i) t1[i] = (*pl)[i] * x[i];
    A_inv->apply(t1, t2);
    S_local->multiply(x, y);
    for (std::size_t i = 0; i < t1.size(); ++i) {
      y[i] = alpha * (*ml)[i] * x[i] + visc * y[i] + coup * (*pl)[i] * t2[i];
    }
  });

  // precondition X by its explicit part Z = alpha Ml + lambda eps tau S,
  // inverted by an inner CG; the remaining coupling term is a mild
  // perturbation, so only a handful of outer iterations remain
  LinearOperator Z(n, [ml, S_local, alpha, visc](std::span<const double> x, std::span<double> y) {
    S_local->multiply(x, y);
    for (std::size_t i = 0; i < x.size(); ++i) {
      y[i] = alpha * (*ml)[i] * x[i] + visc * y[i];
    }
  });
  {
    std::vector<double> diag = S_->diagonal();
    for (int i = 0; i < n; ++i) {
      diag[static_cast<std::size_t>(i)] =
          alpha * ml_[static_cast<std::size_t>(i)] + visc * diag[static_cast<std::size_t>(i)];
    }
    Z.with_diagonal(std::move(diag));
  }
  LinearOperator Z_inv = inverse_operator(Z, inner);

  // d = alpha Ml phi + tau gamma theta_c (Ml p) + tau phi_load - tau gamma P w
  //     - tau (q - (Mb . phi)/(2 lambda)) Mb
  const double Mb_dot_phi_prev = dot(Mb, state.phi);
  std::vector<double> d(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const std::size_t s = static_cast<std::size_t>(i);
    d[s] = alpha * ml_[s] * state.phi[s] + tau * pr.gamma * pr.theta_c * (*pl)[s] -
           tau * pr.gamma * (*pl)[s] * w[s] -
           tau * (state.q - Mb_dot_phi_prev / (2.0 * pr.lambda)) * Mb[s];
  }
  if (!loads.phi_load.empty()) axpy(tau, loads.phi_load, d);

  // two SPD solves resolve the rank-one coupling through the corrected
  // scalar identity (Mb . phi_n)(1 + (tau/2 lambda) Mb . X^{-1} Mb) = Mb . X^{-1} d
  const std::span<const double> phi_guess =
      options.zero_initial_guess ? std::span<const double>{} : std::span<const double>(state.phi);
  std::vector<double> y_d = cg_solve(X, d, config_, phi_guess, Z_inv).x;
  std::vector<double> y_b = cg_solve(X, Mb, config_, {}, Z_inv).x;
  const double denom = 1.0 + tau / (2.0 * pr.lambda) * dot(Mb, y_b);
  const double Mb_dot_phi_new = dot(Mb, y_d) / denom;

  State next;
  next.t = state.t + tau;
  next.phi = std::move(y_d);
  axpy(-tau / (2.0 * pr.lambda) * Mb_dot_phi_new, y_b, next.phi);

  // theta_n = A^{-1}(delta Ml theta + gamma P dphi + tau heat)
  std::vector<double> theta_rhs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const std::size_t s = static_cast<std::size_t>(i);
    theta_rhs[s] =
        delta * ml_[s] * state.theta[s] + pr.gamma * (*pl)[s] * (next.phi[s] - state.phi[s]);
  }
  if (!loads.heat_load.empty()) axpy(tau, loads.heat_load, theta_rhs);
  next.theta = cg_solve(A_theta, theta_rhs, inner, theta_guess).x;

  next.q = state.q + (Mb_dot_phi_new - Mb_dot_phi_prev) / (2.0 * pr.lambda);
  next.theta0 = state.theta0;

  if (options.solve_elasticity) {
    ElasticSystem system = assemble_elastic_system(space_, params_, laws_, next.phi, next.theta,
                                                   next.theta0, loads.body_load);
    next.u = solve_displacement(system, config_,
                                options.zero_initial_guess ? std::span<const double>{}
                                                           : std::span<const double>(state.u));
  } else {
    next.u = state.u;
  }

  EnergyRecord record = make_record(state, next, tau);
  return {std::move(next), record};
}

std::pair<State, EnergyRecord> SavSolver::step_monolithic(const State& state, double tau,
                                                          const StepLoads& loads,
                                                          const StepOptions& options) const {
  const int n = space_.n_dofs;
  if (n > 3000) {
    throw std::invalid_argument(
        "SavSolver: the monolithic cross-validation solve is dense and limited to meshes with at "
        "most 3000 nodes");
  }
  const ModelParams& pr = params_;
  const int total = 2 * n + 1;

  const double Q_prev = q_of(state.phi);
  std::vector<double> b = map_nodal(state.phi, laws_.W_prime);
  for (double& v : b) v *= pr.lambda / (pr.epsilon * Q_prev);
  const std::vector<double> Mb = scale_by(ml_, b);
  const std::vector<double> p_nodal = map_nodal(state.phi, laws_.p);
  const std::vector<double> pl = scale_by(ml_, p_nodal);

  // block system over (phi_n, theta_n, q_n)
  std::vector<double> A(static_cast<std::size_t>(total) * static_cast<std::size_t>(total), 0.0);
  std::vector<double> rhs(static_cast<std::size_t>(total), 0.0);

  add_dense_diag_block(A, total, 0, 0, ml_, pr.alpha);
  add_dense_sparse_block(A, total, 0, 0, *S_, pr.lambda * pr.epsilon * tau);
  add_dense_diag_block(A, total, 0, n, pl, tau * pr.gamma);
  add_dense_diag_block(A, total, n, 0, pl, -pr.gamma);
  add_dense_diag_block(A, total, n, n, ml_, pr.delta);
  add_dense_sparse_block(A, total, n, n, *S_, tau);
  for (int i = 0; i < n; ++i) {
    A[static_cast<std::size_t>(i) * static_cast<std::size_t>(total) +
      static_cast<std::size_t>(2 * n)] = tau * Mb[static_cast<std::size_t>(i)];
    A[static_cast<std::size_t>(2 * n) * static_cast<std::size_t>(total) +
      static_cast<std::size_t>(i)] = -Mb[static_cast<std::size_t>(i)] / (2.0 * pr.lambda);
  }
  A[static_cast<std::size_t>(2 * n) * static_cast<std::size_t>(total) +
    static_cast<std::size_t>(2 * n)] = 1.0;

  for (int i = 0; i < n; ++i) {
    const std::size_t s = static_cast<std::size_t>(i);
    rhs[s] = pr.alpha * ml_[s] * state.phi[s] + tau * pr.gamma * pr.theta_c * pl[s] +
             (loads.phi_load.empty() ? 0.0 : tau * loads.phi_load[s]);
    rhs[static_cast<std::size_t>(n + i)] =
        pr.delta * ml_[s] * state.theta[s] - pr.gamma * pl[s] * state.phi[s] +
        (loads.heat_load.empty() ? 0.0 : tau * loads.heat_load[s]);
  }
  rhs[static_cast<std::size_t>(2 * n)] = state.q - dot(Mb, state.phi) / (2.0 * pr.lambda);

  std::vector<double> solution = dense_lu_solve(std::move(A), std::move(rhs));

  State next;
  next.t = state.t + tau;
  next.phi.assign(solution.begin(), solution.begin() + n);
  next.theta.assign(solution.begin() + n, solution.begin() + 2 * n);
  next.q = solution[static_cast<std::size_t>(2 * n)];
  next.theta0 = state.theta0;

  if (options.solve_elasticity) {
    ElasticSystem system = assemble_elastic_system(space_, params_, laws_, next.phi, next.theta,
                                                   next.theta0, loads.body_load);
    next.u = solve_displacement(system, config_,
                                options.zero_initial_guess ? std::span<const double>{}
                                                           : std::span<const double>(state.u));
  } else {
    next.u = state.u;
  }

  EnergyRecord record = make_record(state, next, tau);
  return {std::move(next), record};
}

EnergyRecord SavSolver::make_record(const State& prev, const State& next, double tau) const {
  const ModelParams& pr = params_;
  EnergyRecord record;
  record.t = next.t;
  record.energy = energy(next.phi, next.theta, next.q);

  std::vector<double> dphi = next.phi;
  axpy(-1.0, prev.phi, dphi);
  const double dq = next.q - prev.q;

  double dphi_sq = 0.0, dtheta_sq = 0.0;
  for (std::size_t i = 0; i < dphi.size(); ++i) {
    dphi_sq += ml_[i] * dphi[i] * dphi[i];
    const double dth = next.theta[i] - prev.theta[i];
    dtheta_sq += ml_[i] * dth * dth;
  }

  record.dissipation = pr.alpha / tau * dphi_sq +
                       tau * dot(S_->multiply(next.theta), next.theta) +
                       0.5 * pr.lambda * pr.epsilon * dot(S_->multiply(dphi), dphi) +
                       pr.lambda * dq * dq + 0.5 * pr.delta * dtheta_sq;
  return record;
}

State SavSolver::run(const State& initial, double t_final, double tau,
                     const std::function<StepLoads(double)>& loads_at, const RunHooks& hooks,
                     int elasticity_stride) const {
  if (elasticity_stride < 1) {
    throw std::invalid_argument("SavSolver::run: elasticity_stride must be >= 1");
  }
  const int n_steps = step_count(t_final, tau);

  State state = initial;
  if (hooks.snapshot_stride > 0 && hooks.on_snapshot) hooks.on_snapshot(0, state);

  for (int n = 1; n <= n_steps; ++n) {
    const double t_n = n * tau;
    StepLoads loads = loads_at ? loads_at(t_n) : StepLoads{};
    StepOptions options;
    options.solve_elasticity = (n % elasticity_stride == 0) || n == n_steps;
    try {
      auto [next, record] = step(state, tau, loads, options);
      state = std::move(next);
      if (hooks.on_step) hooks.on_step(n, state, record);
      if (hooks.snapshot_stride > 0 && hooks.on_snapshot &&
          (n % hooks.snapshot_stride == 0 || n == n_steps)) {
        hooks.on_snapshot(n, state);
      }
    } catch (const SolverError& e) {
      throw std::runtime_error("step " + std::to_string(n) + " (t=" + std::to_string(t_n) +
                               "): " + e.what());
    }
  }
  return state;
}

}  // namespace slafem
