#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "slafem/model.hpp"
#include "slafem/sav.hpp"
#include "slafem/solver.hpp"
#include "slafem/source.hpp"

namespace slafem {

enum class RunMode { simulate, mms_converge, stability, info };

enum class FieldFormat { csv, vtk_legacy };

/// Initial-field selector: a constant or a named function.
///   constant:<value>
///   random_smooth:<seed>   Neumann-compatible low-frequency cosine sum
struct InitSelector {
  std::string text = "constant:0";
};

ScalarField make_init_field(const InitSelector& sel);
ScalarField random_smooth_field(unsigned seed);

struct MmsOptions {
  bool spatial = true;
  bool temporal = true;
  bool paper_scale = false;
  // empty means the built-in desk/paper grids
  std::vector<int> spatial_ns;
  std::vector<double> spatial_taus;
  std::vector<int> temporal_ns;
  std::vector<double> temporal_taus;
};

struct OutputOptions {
  std::string directory = "out";
  int snapshot_stride = 0;
  std::vector<FieldFormat> formats{FieldFormat::csv};
};

struct RunConfig {
  RunMode mode = RunMode::simulate;
  int n_per_side = 16;
  double tau = 0.01;
  double t_final = 1.0;
  ModelParams params;
  SourceSpec source;
  InitSelector init_phi{"constant:-1"};
  InitSelector init_theta{"constant:0"};
  InitMode init_mode = InitMode::nodal;
  OutputOptions output;
  SolverConfig solver;
  StepAlgorithm algorithm = StepAlgorithm::elimination;
  int elasticity_stride = 1;
  MmsOptions mms;
  unsigned stability_seed = 42;
};

/// Itemized parse/validation failure; what() lists every issue with its
/// location.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

/// Parses the INI-style grammar documented in the README ([section] headers,
/// key = value lines, # comments) and validates the result, including the
/// model assumption checks and the t_final/tau divisibility rule.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace slafem
