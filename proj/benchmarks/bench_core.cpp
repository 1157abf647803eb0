#include <benchmark/benchmark.h>

#include <random>

#include "slafem/fem.hpp"
#include "slafem/model.hpp"
#include "slafem/sav.hpp"

using namespace slafem;

namespace {

ModelParams reference_params() {
  ModelParams p;
  p.epsilon = 0.1;
  p.delta = 1.2;
  return p;
}

}  // namespace

static void BM_AssembleMass(benchmark::State& state) {
  const FemSpace space = make_space(build_uniform(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_mass(space));
  }
}
BENCHMARK(BM_AssembleMass)->Arg(32)->Arg(64)->Arg(128);

static void BM_Spmv(benchmark::State& state) {
  const FemSpace space = make_space(build_uniform(static_cast<int>(state.range(0))));
  const SparseMatrix S = assemble_stiffness(space);
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> dist(-1, 1);
  std::vector<double> x(static_cast<std::size_t>(space.n_dofs));
  for (double& v : x) v = dist(rng);
  std::vector<double> y(x.size());
  for (auto _ : state) {
    S.multiply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_Spmv)->Arg(64)->Arg(128)->Arg(256);

static void BM_CgMassSolve(benchmark::State& state) {
  const FemSpace space = make_space(build_uniform(static_cast<int>(state.range(0))));
  const SparseMatrix M = assemble_mass(space);
  std::vector<double> ones(static_cast<std::size_t>(space.n_dofs), 1.0);
  const std::vector<double> b = M.multiply(ones);
  SolverConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cg_solve(make_operator(M), b, config));
  }
}
BENCHMARK(BM_CgMassSolve)->Arg(32)->Arg(64);

static void BM_SavStep(benchmark::State& state) {
  const FemSpace space = make_space(build_uniform(static_cast<int>(state.range(0))));
  const ModelParams params = reference_params();
  SavSolver solver(space, params, default_laws(params), SolverConfig{});
  State s0 = solver.initialize(constant_field(0.2), constant_field(0.1), InitMode::nodal);
  StepOptions options;
  options.solve_elasticity = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solver.step(s0, 0.01, {}, options));
  }
}
BENCHMARK(BM_SavStep)->Arg(16)->Arg(32)->Arg(64);

static void BM_ElasticityAssemble(benchmark::State& state) {
  const FemSpace space = make_space(build_uniform(static_cast<int>(state.range(0))));
  const ModelParams params = reference_params();
  const MaterialLaws laws = default_laws(params);
  std::vector<double> phi(static_cast<std::size_t>(space.n_dofs), 0.7);
  std::vector<double> theta(static_cast<std::size_t>(space.n_dofs), 0.2);
  std::vector<double> theta0(static_cast<std::size_t>(space.n_dofs), 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_elastic_system(space, params, laws, phi, theta, theta0));
  }
}
BENCHMARK(BM_ElasticityAssemble)->Arg(32)->Arg(64);

BENCHMARK_MAIN();
