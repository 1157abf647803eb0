// slafem command-line driver: phase-field stereolithography simulations,
// manufactured-solution convergence sweeps, and energy-stability checks.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "slafem/config.hpp"
#include "slafem/mms.hpp"
#include "slafem/output.hpp"
#include "slafem/sav.hpp"

namespace {

using namespace slafem;

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitIo = 4;
constexpr int kExitCheck = 5;

std::string resolve_output_dir(const RunConfig& config, const std::string& cli_override) {
  if (!cli_override.empty()) return cli_override;
  if (const char* env = std::getenv("SLAFEM_OUTPUT_DIR"); env && *env) return env;
  return config.output.directory;
}

std::string snapshot_name(const std::string& dir, int step, FieldFormat format) {
  char name[64];
  std::snprintf(name, sizeof name, "fields_%06d.%s", step,
                format == FieldFormat::csv ? "csv" : "vtk");
  return (std::filesystem::path(dir) / name).string();
}

int run_simulate(const RunConfig& config, const std::string& out_dir) {
  const FemSpace space = make_space(build_uniform(config.n_per_side));
  const MaterialLaws laws = default_laws(config.params);
  SavSolver solver(space, config.params, laws, config.solver, config.algorithm);

  const SourceSpec& source = config.source;
  auto loads_at = [&](double t) {
    StepLoads loads;
    if (source.kind != SourceKind::none) {
      loads.heat_load = solver.source_load(
          [&](double x, double y, double tt) { return evaluate(source, x, y, tt); }, t);
    }
    return loads;
  };

  State state = solver.initialize(make_init_field(config.init_phi),
                                  make_init_field(config.init_theta), config.init_mode);

  std::vector<EnergyRecord> records;
  records.push_back({0.0, solver.energy(state.phi, state.theta, state.q), 0.0});

  RunHooks hooks;
  hooks.snapshot_stride = config.output.snapshot_stride;
  hooks.on_snapshot = [&](int step, const State& s) {
    for (FieldFormat format : config.output.formats) {
      write_fields(s, space.mesh, snapshot_name(out_dir, step, format), format);
    }
  };
  hooks.on_step = [&](int step, const State&, const EnergyRecord& record) {
    records.push_back(record);
    const int total = step_count(config.t_final, config.tau);
    if (step % std::max(1, total / 10) == 0) {
      std::cerr << "step " << step << "/" << total << "  E=" << record.energy << "\n";
    }
  };

  const State final_state =
      solver.run(state, config.t_final, config.tau, loads_at, hooks, config.elasticity_stride);

  for (FieldFormat format : config.output.formats) {
    write_fields(final_state, space.mesh,
                 (std::filesystem::path(out_dir) / (format == FieldFormat::csv ? "fields_final.csv"
                                                                               : "fields_final.vtk"))
                     .string(),
                 format);
  }
  write_energy_series(records, (std::filesystem::path(out_dir) / "energy.csv").string());
  std::cout << "wrote " << out_dir << "/fields_final.* and energy.csv ("
            << records.size() - 1 << " steps)\n";
  return 0;
}

int run_mms(const RunConfig& config, const std::string& out_dir, bool paper_scale_flag) {
  const bool paper = paper_scale_flag || config.mms.paper_scale;
  const ManufacturedCase mcase = build_case(config.params);

  auto progress = [](const ErrorEntry& e) {
    std::cerr << "  h=" << e.h << " tau=" << e.tau << "  phi_L2=" << e.phi_l2
              << "  theta_L2=" << e.theta_l2 << "  u_L2=" << e.u_l2 << "\n";
  };

  if (config.mms.spatial) {
    std::vector<int> ns = config.mms.spatial_ns;
    std::vector<double> taus = config.mms.spatial_taus;
    if (ns.empty()) {
      ns = {8, 16, 32, 64};
      if (paper) ns.push_back(128);
    }
    if (taus.empty()) taus = {0.01, 0.005};
    std::cerr << "spatial sweep...\n";
    const ErrorReport report =
        spatial_sweep(mcase, taus, ns, config.t_final, config.solver, progress);
    std::cout << report_table(report);
    write_error_csv(report, (std::filesystem::path(out_dir) / "errors_spatial.csv").string());
    emit_plots(report, (std::filesystem::path(out_dir) / "plots_spatial").string());
  }
  if (config.mms.temporal) {
    std::vector<int> ns = config.mms.temporal_ns;
    std::vector<double> taus = config.mms.temporal_taus;
    if (ns.empty()) {
      ns = {100};
      if (paper) ns.push_back(200);
    }
    if (taus.empty()) taus = {0.1, 0.05, 0.025, 0.0125, 0.00625};
    std::cerr << "temporal sweep...\n";
    const ErrorReport report =
        temporal_sweep(mcase, ns, taus, config.t_final, config.solver, progress);
    std::cout << report_table(report);
    write_error_csv(report, (std::filesystem::path(out_dir) / "errors_temporal.csv").string());
    emit_plots(report, (std::filesystem::path(out_dir) / "plots_temporal").string());
  }
  std::cout << "wrote error tables and plot data under " << out_dir << "\n";
  return 0;
}

int run_stability(const RunConfig& config, const std::string& out_dir) {
  const FemSpace space = make_space(build_uniform(config.n_per_side));
  const MaterialLaws laws = default_laws(config.params);
  SavSolver solver(space, config.params, laws, config.solver);

  State state = solver.initialize(random_smooth_field(config.stability_seed),
                                  random_smooth_field(config.stability_seed + 1), InitMode::nodal);

  std::vector<EnergyRecord> records;
  records.push_back({0.0, solver.energy(state.phi, state.theta, state.q), 0.0});
  int violations = 0;
  double previous = records.front().energy;

  RunHooks hooks;
  hooks.on_step = [&](int step, const State&, const EnergyRecord& record) {
    const double residual = record.energy - previous + record.dissipation;
    const double allowed = 1e-8 * std::max(1.0, previous);
    if (std::abs(residual) > allowed || record.energy > previous + allowed) {
      ++violations;
      std::cerr << "violation at step " << step << ": residual=" << residual
                << " E=" << record.energy << " E_prev=" << previous << "\n";
    }
    previous = record.energy;
    records.push_back(record);
  };

  solver.run(state, config.t_final, config.tau, nullptr, hooks, config.elasticity_stride);
  write_energy_series(records, (std::filesystem::path(out_dir) / "energy.csv").string());

  if (violations > 0) {
    std::cout << "energy-stability check FAILED: " << violations << " violation(s) over "
              << records.size() - 1 << " steps\n";
    return kExitCheck;
  }
  std::cout << "energy-stability check passed: identity and monotone decay over "
            << records.size() - 1 << " steps (E_0=" << records.front().energy
            << ", E_N=" << records.back().energy << ")\n";
  return 0;
}

void print_info() {
  std::cout <<
      R"(slafem: phase-field simulation of stereolithography curing
first-order scalar-auxiliary-variable time stepping with P1 finite elements,
quasi-static thermoelasticity, laser heat sources, and a manufactured-solution
convergence harness.

subcommands
  simulate <config>      time integration with field snapshots + energy series
  mms-converge <config>  spatial/temporal convergence sweeps (rates table, CSV, plots)
  stability <config>     zero-source run verifying the discrete energy identity
  info                   this text

config grammar: INI-style sections ([run], [mesh], [time], [params], [source],
[init], [output], [solver], [elasticity], [mms], [stability]) with key = value
lines and # comments; see README.md and presets/ for annotated examples.

output directory precedence: --output flag, then SLAFEM_OUTPUT_DIR, then the
config's [output] directory.

exit codes: 0 ok, 2 config error, 3 solver failure, 4 I/O error,
5 stability-check failure.
)";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phase-field stereolithography simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_override;
  bool paper_scale = false;

  CLI::App* simulate = app.add_subcommand("simulate", "run a time integration");
  simulate->add_option("config", config_path, "config file")->required();
  simulate->add_option("--output", output_override, "output directory override");
  simulate->add_flag("--paper-scale", paper_scale, "full published resolution (h = 1/400)");

  CLI::App* mms = app.add_subcommand("mms-converge", "manufactured-solution convergence study");
  mms->add_option("config", config_path, "config file")->required();
  mms->add_option("--output", output_override, "output directory override");
  mms->add_flag("--paper-scale", paper_scale, "full published sweep grids");

  CLI::App* stability = app.add_subcommand("stability", "energy-stability check");
  stability->add_option("config", config_path, "config file")->required();
  stability->add_option("--output", output_override, "output directory override");

  CLI::App* info = app.add_subcommand("info", "print program information");

  CLI11_PARSE(app, argc, argv);

  if (info->parsed()) {
    print_info();
    return 0;
  }

  try {
    RunConfig config = load_config(config_path);
    const std::string out_dir = resolve_output_dir(config, output_override);
    std::filesystem::create_directories(out_dir);

    if (simulate->parsed()) {
      if (config.mode != RunMode::simulate) {
        std::cerr << "config mode does not match the simulate subcommand\n";
        return kExitConfig;
      }
      if (paper_scale) config.n_per_side = 400;
      return run_simulate(config, out_dir);
    }
    if (mms->parsed()) {
      if (config.mode != RunMode::mms_converge) {
        std::cerr << "config mode does not match the mms-converge subcommand\n";
        return kExitConfig;
      }
      return run_mms(config, out_dir, paper_scale);
    }
    if (stability->parsed()) {
      if (config.mode != RunMode::stability) {
        std::cerr << "config mode does not match the stability subcommand\n";
        return kExitConfig;
      }
      return run_stability(config, out_dir);
    }
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O failure: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    const std::string what = e.what();
    if (what.find("cannot open") != std::string::npos ||
        what.find("writing") != std::string::npos) {
      return kExitIo;
    }
    if (what.find("step ") == 0) return kExitSolver;
    return 1;
  }
  return 0;
}
