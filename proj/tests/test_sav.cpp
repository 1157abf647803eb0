#include <doctest.h>

#include <cmath>
#include <random>

#include "slafem/config.hpp"
#include "slafem/sav.hpp"
#include "support/testing.hpp"

using namespace slafem;
namespace st = slafem::testing;

namespace {

ModelParams mms_params() {
  ModelParams p;
  p.alpha = 1.0;
  p.lambda = 1.0;
  p.epsilon = 0.1;
  p.gamma = 1.0;
  p.theta_c = 0.0;
  p.delta = 1.2;
  p.kappa = 0.01;
  p.phi_gel = 0.5;
  p.young_modulus = 1.0;
  p.poisson_ratio = 0.3;
  p.zeta = 1.0;
  p.beta = 0.5;
  return p;
}

SolverConfig tight_config() {
  SolverConfig config;
  config.rel_tolerance = 1e-11;
  return config;
}

State random_state(const SavSolver& solver, std::mt19937& rng) {
  const int n = solver.space().n_dofs;
  State state;
  state.phi = st::random_vector(n, rng, -1.0, 1.0);
  state.theta = st::random_vector(n, rng, -0.8, 0.8);
  state.q = solver.q_of(state.phi) * std::uniform_real_distribution<double>(0.9, 1.1)(rng);
  state.u.assign(static_cast<std::size_t>(2 * n), 0.0);
  state.theta0.assign(static_cast<std::size_t>(n), 0.0);
  return state;
}

struct Residuals {
  double phi_rel = 0.0;
  double theta_rel = 0.0;
  double q_abs = 0.0;
};

// verifies the discrete weak equations the step must satisfy, straight from
// their matrix-vector statement in the stepper's lumped mass pairing
Residuals step_residuals(const SavSolver& solver, const State& prev, const State& next, double tau,
                         const StepLoads& loads) {
  const ModelParams& pr = solver.params();
  const MaterialLaws& laws = solver.laws();
  const FemSpace& space = solver.space();
  const std::vector<double>& ml = solver.lumped_mass();
  const SparseMatrix& S = solver.stiffness();
  const int n = space.n_dofs;

  const double Q_prev = solver.q_of(prev.phi);
  std::vector<double> w_load(static_cast<std::size_t>(n));  // lumped load of W'(phi)
  std::vector<double> pl(static_cast<std::size_t>(n));      // lumped p-weights
  std::vector<double> Mb(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const std::size_t s = static_cast<std::size_t>(i);
    w_load[s] = ml[s] * laws.W_prime(prev.phi[s]);
    pl[s] = ml[s] * laws.p(prev.phi[s]);
    Mb[s] = pr.lambda / (pr.epsilon * Q_prev) * w_load[s];
  }

  std::vector<double> dphi = next.phi;
  axpy(-1.0, prev.phi, dphi);
  std::vector<double> dtheta = next.theta;
  axpy(-1.0, prev.theta, dtheta);

  auto max_norm = [](std::initializer_list<double> values) {
    double m = 0.0;
    for (double v : values) m = std::max(m, v);
    return std::max(m, 1e-300);
  };

  Residuals res;
  {
    std::vector<double> r(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const std::size_t s = static_cast<std::size_t>(i);
      r[s] = pr.alpha / tau * ml[s] * dphi[s];
    }
    const double r0 = norm2(r);
    axpy(next.q, Mb, r);
    std::vector<double> Ptheta(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const std::size_t s = static_cast<std::size_t>(i);
      Ptheta[s] = pl[s] * next.theta[s];
      r[s] += pr.gamma * Ptheta[s] - pr.gamma * pr.theta_c * pl[s];
    }
    std::vector<double> Sphi = S.multiply(next.phi);
    axpy(pr.lambda * pr.epsilon, Sphi, r);
    if (!loads.phi_load.empty()) axpy(-1.0, loads.phi_load, r);
    const double scale =
        max_norm({r0, std::abs(next.q) * norm2(Mb), pr.gamma * norm2(Ptheta),
                  pr.lambda * pr.epsilon * norm2(Sphi)});
    res.phi_rel = norm2(r) / scale;
  }
  {
    std::vector<double> r(static_cast<std::size_t>(n));
    std::vector<double> Pdphi(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const std::size_t s = static_cast<std::size_t>(i);
      r[s] = pr.delta / tau * ml[s] * dtheta[s];
      Pdphi[s] = pl[s] * dphi[s];
    }
    const double r0 = norm2(r);
    axpy(-pr.gamma / tau, Pdphi, r);
    std::vector<double> Stheta = S.multiply(next.theta);
    axpy(1.0, Stheta, r);
    if (!loads.heat_load.empty()) axpy(-1.0, loads.heat_load, r);
    const double scale = max_norm({r0, pr.gamma / tau * norm2(Pdphi), norm2(Stheta)});
    res.theta_rel = norm2(r) / scale;
  }
  {
    const double expected = prev.q + dot(w_load, dphi) / (2.0 * pr.epsilon * Q_prev);
    res.q_abs = std::abs(next.q - expected) / std::max(1.0, std::abs(expected));
  }
  return res;
}

}  // namespace

TEST_SUITE("sav") {

TEST_CASE("initialization sets the auxiliary variable from the well integral") {
  const FemSpace space = make_space(build_uniform(8));
  const ModelParams params = mms_params();
  const SavSolver solver(space, params, default_laws(params), tight_config());

  const State sol = solver.initialize(constant_field(-1.0), constant_field(0.0), InitMode::nodal);
  CHECK(sol.q == doctest::Approx(1.0).epsilon(1e-12));
  for (double v : sol.theta) CHECK(v == 0.0);

  // W(0) = 1/4 on the whole unit square, eps = 0.1: q = sqrt(0.25/0.1 + 1)
  const State mid = solver.initialize(constant_field(0.0), constant_field(0.0), InitMode::nodal);
  CHECK(mid.q == doctest::Approx(std::sqrt(3.5)).epsilon(1e-12));
  CHECK(mid.q == doctest::Approx(1.8708286933869707).epsilon(1e-12));

  const State ritz = solver.initialize(constant_field(0.0), constant_field(0.0), InitMode::ritz);
  for (double v : ritz.theta) CHECK(std::abs(v) <= 1e-9);
  for (double v : ritz.phi) CHECK(std::abs(v) <= 1e-9);
}

TEST_CASE("uniform sol state at the critical temperature is a fixed point") {
  const FemSpace space = make_space(build_uniform(6));
  ModelParams params = mms_params();
  params.theta_c = 0.3;
  const SavSolver solver(space, params, default_laws(params), tight_config());

  State state = solver.initialize(constant_field(-1.0), constant_field(0.3), InitMode::nodal);
  const double E0 = solver.energy(state.phi, state.theta, state.q);
  auto [next, record] = solver.step(state, 0.05);
  for (int i = 0; i < space.n_dofs; ++i) {
    CHECK(std::abs(next.phi[static_cast<std::size_t>(i)] + 1.0) <= 1e-9);
    CHECK(std::abs(next.theta[static_cast<std::size_t>(i)] - 0.3) <= 1e-9);
  }
  CHECK(std::abs(next.q - state.q) <= 1e-12);
  CHECK(std::abs(record.energy - E0) <= 1e-9 * std::max(1.0, E0));
  CHECK(record.dissipation <= 1e-9);
}

TEST_CASE("step satisfies the discrete weak-equation residual contracts") {
  const FemSpace space = make_space(build_uniform(4));
  const ModelParams params = mms_params();
  const SavSolver solver(space, params, default_laws(params), tight_config());
  std::mt19937 rng(67);

  for (int trial = 0; trial < 4; ++trial) {
    const State state = random_state(solver, rng);
    StepLoads loads;
    if (trial % 2 == 1) {
      loads.phi_load = st::random_vector(space.n_dofs, rng, -0.5, 0.5);
      loads.heat_load = st::random_vector(space.n_dofs, rng, -0.5, 0.5);
    }
    StepOptions options;
    options.solve_elasticity = false;
    const auto [next, record] = solver.step(state, 0.02, loads, options);
    const Residuals res = step_residuals(solver, state, next, 0.02, loads);
    CHECK(res.phi_rel <= 1e-9);
    CHECK(res.theta_rel <= 1e-9);
    CHECK(res.q_abs <= 1e-12);
  }
}

TEST_CASE("energy identity and monotone decay without sources") {
  const FemSpace space = make_space(build_uniform(8));
  const ModelParams params = mms_params();
  const SavSolver solver(space, params, default_laws(params), tight_config());

  const ScalarField phi0 = random_smooth_field(4);
  const ScalarField theta0 = random_smooth_field(5);
  State state = solver.initialize(phi0, theta0, InitMode::nodal);

  double previous_energy = solver.energy(state.phi, state.theta, state.q);
  for (int n = 0; n < 10; ++n) {
    StepOptions options;
    options.solve_elasticity = false;
    auto [next, record] = solver.step(state, 0.05, {}, options);
    CHECK(record.dissipation >= -1e-10 * (1.0 + record.energy));
    CHECK(std::abs(record.energy - previous_energy + record.dissipation) <=
          1e-8 * std::max(1.0, previous_energy));
    CHECK(record.energy <= previous_energy + 1e-10 * std::max(1.0, previous_energy));
    previous_energy = record.energy;
    state = std::move(next);
  }
}

TEST_CASE("elimination agrees with the dense monolithic cross-check") {
  const FemSpace space = make_space(build_uniform(3));
  const ModelParams params = mms_params();
  const MaterialLaws laws = default_laws(params);
  const SavSolver elim(space, params, laws, tight_config(), StepAlgorithm::elimination);
  const SavSolver mono(space, params, laws, tight_config(), StepAlgorithm::monolithic);
  std::mt19937 rng(71);

  for (int trial = 0; trial < 5; ++trial) {
    const State state = random_state(elim, rng);
    StepLoads loads;
    if (trial % 2 == 0) {
      loads.heat_load = st::random_vector(space.n_dofs, rng, -1.0, 1.0);
    }
    StepOptions options;
    options.solve_elasticity = false;
    const auto [a, ra] = elim.step(state, 0.04, loads, options);
    const auto [b, rb] = mono.step(state, 0.04, loads, options);
    double scale = std::max(1.0, norm2(a.phi));
    for (int i = 0; i < space.n_dofs; ++i) {
      CHECK(std::abs(a.phi[static_cast<std::size_t>(i)] - b.phi[static_cast<std::size_t>(i)]) <=
            1e-8 * scale);
      CHECK(std::abs(a.theta[static_cast<std::size_t>(i)] - b.theta[static_cast<std::size_t>(i)]) <=
            1e-8 * std::max(1.0, norm2(a.theta)));
    }
    CHECK(std::abs(a.q - b.q) <= 1e-8 * std::max(1.0, std::abs(a.q)));
  }
}

TEST_CASE("the step solution is unique across initial guesses") {
  const FemSpace space = make_space(build_uniform(4));
  const ModelParams params = mms_params();
  const SavSolver solver(space, params, default_laws(params), tight_config());
  std::mt19937 rng(73);
  const State state = random_state(solver, rng);

  StepOptions warm;
  warm.solve_elasticity = false;
  StepOptions cold = warm;
  cold.zero_initial_guess = true;
  const auto [a, ra] = solver.step(state, 0.03, {}, warm);
  const auto [b, rb] = solver.step(state, 0.03, {}, cold);
  for (int i = 0; i < space.n_dofs; ++i) {
    CHECK(std::abs(a.phi[static_cast<std::size_t>(i)] - b.phi[static_cast<std::size_t>(i)]) <=
          1e-8);
    CHECK(std::abs(a.theta[static_cast<std::size_t>(i)] - b.theta[static_cast<std::size_t>(i)]) <=
          1e-8);
  }
  CHECK(std::abs(a.q - b.q) <= 1e-8);
}

TEST_CASE("the step is affine in the heat load") {
  const FemSpace space = make_space(build_uniform(4));
  const ModelParams params = mms_params();
  const SavSolver solver(space, params, default_laws(params), tight_config());
  std::mt19937 rng(79);
  const State state = random_state(solver, rng);

  StepLoads l1, l2, l12;
  l1.heat_load = st::random_vector(space.n_dofs, rng);
  l2.heat_load = st::random_vector(space.n_dofs, rng);
  l12.heat_load.resize(static_cast<std::size_t>(space.n_dofs));
  for (int i = 0; i < space.n_dofs; ++i) {
    l12.heat_load[static_cast<std::size_t>(i)] = l1.heat_load[static_cast<std::size_t>(i)] +
                                                 l2.heat_load[static_cast<std::size_t>(i)];
  }
  StepOptions options;
  options.solve_elasticity = false;
  const auto [s0, r0] = solver.step(state, 0.05, {}, options);
  const auto [s1, r1] = solver.step(state, 0.05, l1, options);
  const auto [s2, r2] = solver.step(state, 0.05, l2, options);
  const auto [s12, r12] = solver.step(state, 0.05, l12, options);

  for (int i = 0; i < space.n_dofs; ++i) {
    const std::size_t s = static_cast<std::size_t>(i);
    const double lhs_phi = s12.phi[s] - s0.phi[s];
    const double rhs_phi = (s1.phi[s] - s0.phi[s]) + (s2.phi[s] - s0.phi[s]);
    CHECK(std::abs(lhs_phi - rhs_phi) <= 1e-7 * std::max(1.0, std::abs(rhs_phi)));
    const double lhs_theta = s12.theta[s] - s0.theta[s];
    const double rhs_theta = (s1.theta[s] - s0.theta[s]) + (s2.theta[s] - s0.theta[s]);
    CHECK(std::abs(lhs_theta - rhs_theta) <= 1e-7 * std::max(1.0, std::abs(rhs_theta)));
  }
}

TEST_CASE("run covers the time grid and rejects non-integral divisions") {
  const FemSpace space = make_space(build_uniform(4));
  const ModelParams params = mms_params();
  const SavSolver solver(space, params, default_laws(params), tight_config());

  CHECK(step_count(1.0, 0.01) == 100);
  CHECK_THROWS_AS(step_count(1.0, 0.3), std::invalid_argument);

  State state = solver.initialize(constant_field(-1.0), constant_field(0.0), InitMode::nodal);
  int steps_seen = 0;
  double previous_energy = solver.energy(state.phi, state.theta, state.q);
  bool monotone = true;
  RunHooks hooks;
  hooks.on_step = [&](int, const State&, const EnergyRecord& record) {
    ++steps_seen;
    if (record.energy > previous_energy + 1e-10 * std::max(1.0, previous_energy)) {
      monotone = false;
    }
    previous_energy = record.energy;
  };
  const State final_state = solver.run(state, 1.0, 0.01, nullptr, hooks, 10);
  CHECK(steps_seen == 100);
  CHECK(monotone);
  // uniform sol phase with zero source stays put
  for (int i = 0; i < space.n_dofs; ++i) {
    CHECK(std::abs(final_state.phi[static_cast<std::size_t>(i)] + 1.0) <= 1e-7);
    CHECK(std::abs(final_state.theta[static_cast<std::size_t>(i)]) <= 1e-7);
  }
  CHECK_THROWS_AS(solver.run(state, 1.0, 0.3, nullptr, RunHooks{}, 1), std::invalid_argument);
}

}  // TEST_SUITE
