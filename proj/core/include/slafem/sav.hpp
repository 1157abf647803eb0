#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "slafem/elasticity.hpp"
#include "slafem/fem.hpp"
#include "slafem/model.hpp"

namespace slafem {

/// One time level of the discrete solution. u is full-length (2 per node,
/// zeros on the boundary); theta0 is the thermal-strain reference captured
/// at initialization.
struct State {
  double t = 0.0;
  std::vector<double> phi;
  std::vector<double> theta;
  double q = 1.0;
  std::vector<double> u;
  std::vector<double> theta0;
};

/// E_n = (lambda eps/2)||grad phi||^2 + lambda q^2 + (delta/2)||theta - theta_c||^2,
/// dissipation = (alpha/tau)||dphi||^2 + tau||grad theta_n||^2
///             + (lambda eps/2)||grad dphi||^2 + lambda dq^2 + (delta/2)||dtheta||^2.
struct EnergyRecord {
  double t = 0.0;
  double energy = 0.0;
  double dissipation = 0.0;
};

/// External loads at one time level in the stepper's discrete duality
/// (its lumped mass times nodal source values; build them with
/// SavSolver::source_load). Empty means zero. body_load is full-length
/// (2 n_nodes) for the elasticity right side.
struct StepLoads {
  std::vector<double> phi_load;
  std::vector<double> heat_load;
  std::vector<double> body_load;
};

enum class InitMode { ritz, nodal };
enum class StepAlgorithm { elimination, monolithic };

struct StepOptions {
  bool solve_elasticity = true;
  bool zero_initial_guess = false;  // verification knob: start CG from zero
};

struct RunHooks {
  int snapshot_stride = 0;  // 0 disables snapshots
  std::function<void(int step, const State&)> on_snapshot;
  std::function<void(int step, const State&, const EnergyRecord&)> on_step;
};

/// First-order SAV stepper for the coupled phase-field / temperature /
/// elasticity system. The step solves only SPD systems: the temperature
/// block by CG, the phase block by two CG solves with the rank-one coupling
/// resolved through the corrected scalar identity. A monolithic dense solve
/// of the full block system is available as a cross-validation algorithm.
///
/// The stepper's mass and coupling products use the lumped (nodal) inner
/// product (f,g)^h = int I_h(fg); on the uniform mesh this pairing tracks
/// nodal values with a much smaller consistency constant than the
/// consistent-mass pairing, which the convergence tolerances rely on.
/// Error norms elsewhere keep the exact mass matrix.
class SavSolver {
 public:
  SavSolver(const FemSpace& space, ModelParams params, MaterialLaws laws,
            SolverConfig config, StepAlgorithm algorithm = StepAlgorithm::elimination);

  State initialize(const ScalarField& phi0, const ScalarField& theta0, InitMode mode,
                   const StepLoads& loads_at_zero = {}) const;

  std::pair<State, EnergyRecord> step(const State& state, double tau,
                                      const StepLoads& loads = {},
                                      const StepOptions& options = {}) const;

  /// Runs t_final / tau steps (the division must be integral). Elasticity is
  /// solved every elasticity_stride steps and at the final step. Loads are
  /// evaluated at the implicit endpoint t_n. Step failures are rethrown with
  /// the step index attached.
  State run(const State& initial, double t_final, double tau,
            const std::function<StepLoads(double)>& loads_at, const RunHooks& hooks = {},
            int elasticity_stride = 1) const;

  /// Q_h(phi) from (1/eps) int W(phi_h) + 1, order-4 quadrature (exact for
  /// the quartic well of a P1 argument). Values below 1 signal a broken
  /// quadrature and throw.
  double q_of(std::span<const double> phi) const;

  /// E_n in the stepper's (lumped) norms; exact under the step identity.
  double energy(std::span<const double> phi, std::span<const double> theta, double q) const;

  /// Load vector of a source function at time t in the stepper's duality
  /// (lumped mass times nodal values).
  std::vector<double> source_load(const std::function<double(double, double, double)>& f,
                                  double t) const;

  const SparseMatrix& mass() const { return *M_; }
  const SparseMatrix& stiffness() const { return *S_; }
  const std::vector<double>& lumped_mass() const { return ml_; }
  const FemSpace& space() const { return space_; }
  const ModelParams& params() const { return params_; }
  const MaterialLaws& laws() const { return laws_; }
  const SolverConfig& solver_config() const { return config_; }

 private:
  std::pair<State, EnergyRecord> step_elimination(const State& state, double tau,
                                                  const StepLoads& loads,
                                                  const StepOptions& options) const;
  std::pair<State, EnergyRecord> step_monolithic(const State& state, double tau,
                                                 const StepLoads& loads,
                                                 const StepOptions& options) const;
  EnergyRecord make_record(const State& prev, const State& next, double tau) const;
  void check_state(const State& state) const;

  const FemSpace& space_;
  ModelParams params_;
  MaterialLaws laws_;
  SolverConfig config_;
  StepAlgorithm algorithm_;
  std::shared_ptr<const SparseMatrix> M_;
  std::shared_ptr<const SparseMatrix> S_;
  std::vector<double> ml_;  // lumped mass (row sums of M)
};

/// Number of steps for an integral division t_final / tau; throws
/// std::invalid_argument otherwise.
int step_count(double t_final, double tau);

}  // namespace slafem
