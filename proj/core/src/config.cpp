#include "slafem/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace slafem {

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error([&issues] {
        std::string joined = "configuration invalid:";
        for (const auto& issue : issues) joined += "\n  - " + issue;
        return joined;
      }()),
      issues_(std::move(issues)) {}

ScalarField random_smooth_field(unsigned seed) {
  // low-frequency cosine sum: satisfies the homogeneous Neumann condition
  // on every edge exactly and is as smooth as (A5) asks
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-0.4, 0.4);
  std::vector<double> coeff;
  const int modes = 4;
  for (int k = 0; k < modes; ++k) {
    for (int l = 0; l < modes; ++l) {
      coeff.push_back(dist(rng) / (1.0 + k + l));
    }
  }
  auto value = [coeff, modes](double x, double y) {
    double v = 0.0;
    for (int k = 0; k < modes; ++k) {
      for (int l = 0; l < modes; ++l) {
        v += coeff[static_cast<std::size_t>(k * modes + l)] * std::cos(k * std::numbers::pi * x) *
             std::cos(l * std::numbers::pi * y);
      }
    }
    return v;
  };
  auto gradient = [coeff, modes](double x, double y) {
    std::array<double, 2> g{0.0, 0.0};
    for (int k = 0; k < modes; ++k) {
      for (int l = 0; l < modes; ++l) {
        const double c = coeff[static_cast<std::size_t>(k * modes + l)];
        g[0] += -c * k * std::numbers::pi * std::sin(k * std::numbers::pi * x) *
                std::cos(l * std::numbers::pi * y);
        g[1] += -c * l * std::numbers::pi * std::cos(k * std::numbers::pi * x) *
                std::sin(l * std::numbers::pi * y);
      }
    }
    return g;
  };
  return ScalarField{value, gradient};
}

ScalarField make_init_field(const InitSelector& sel) {
  const std::string& text = sel.text;
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (name == "constant") {
    return constant_field(arg.empty() ? 0.0 : std::stod(arg));
  }
  if (name == "random_smooth") {
    return random_smooth_field(arg.empty() ? 42u : static_cast<unsigned>(std::stoul(arg)));
  }
  throw ConfigError({"unknown init field selector '" + text +
                     "' (expected constant:<value> or random_smooth:<seed>)"});
}

namespace {

struct RawEntry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

class ConfigReader {
 public:
  explicit ConfigReader(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto comment = line.find_first_of("#;");
      if (comment != std::string::npos) line = line.substr(0, comment);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') {
          issues.push_back("line " + std::to_string(line_no) + ": malformed section header");
          continue;
        }
        section = trim(line.substr(1, line.size() - 2));
        seen_sections.push_back(section);
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        issues.push_back("line " + std::to_string(line_no) + ": expected key = value");
        continue;
      }
      RawEntry entry;
      entry.section = section;
      entry.key = trim(line.substr(0, eq));
      entry.value = trim(line.substr(eq + 1));
      entry.line = line_no;
      entries.push_back(entry);
    }
  }

  const RawEntry* find(const std::string& section, const std::string& key) {
    for (auto& e : entries) {
      if (e.section == section && e.key == key) {
        consumed.push_back(&e);
        return &e;
      }
    }
    return nullptr;
  }

  double get_double(const std::string& section, const std::string& key, double fallback,
                    bool* present = nullptr) {
    const RawEntry* e = find(section, key);
    if (present) *present = e != nullptr;
    if (!e) return fallback;
    try {
      std::size_t pos = 0;
      const double v = std::stod(e->value, &pos);
      if (pos != e->value.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      issues.push_back("line " + std::to_string(e->line) + ": [" + section + "] " + key +
                       " is not a number: '" + e->value + "'");
      return fallback;
    }
  }

  int get_int(const std::string& section, const std::string& key, int fallback) {
    const RawEntry* e = find(section, key);
    if (!e) return fallback;
    try {
      std::size_t pos = 0;
      const int v = std::stoi(e->value, &pos);
      if (pos != e->value.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      issues.push_back("line " + std::to_string(e->line) + ": [" + section + "] " + key +
                       " is not an integer: '" + e->value + "'");
      return fallback;
    }
  }

  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) {
    const RawEntry* e = find(section, key);
    return e ? e->value : fallback;
  }

  std::vector<double> get_list(const std::string& section, const std::string& key) {
    const RawEntry* e = find(section, key);
    std::vector<double> values;
    if (!e) return values;
    std::istringstream in(e->value);
    std::string token;
    while (std::getline(in, token, ',')) {
      token = trim(token);
      if (token.empty()) continue;
      try {
        values.push_back(std::stod(token));
      } catch (...) {
        issues.push_back("line " + std::to_string(e->line) + ": [" + section + "] " + key +
                         " has a bad list entry: '" + token + "'");
      }
    }
    return values;
  }

  void report_unknown() {
    for (const auto& e : entries) {
      bool used = false;
      for (const RawEntry* c : consumed) {
        if (c == &e) {
          used = true;
          break;
        }
      }
      if (!used) {
        issues.push_back("line " + std::to_string(e.line) + ": unknown key [" + e.section + "] " +
                         e.key);
      }
    }
  }

  std::vector<RawEntry> entries;
  std::vector<const RawEntry*> consumed;
  std::vector<std::string> seen_sections;
  std::vector<std::string> issues;
};

}  // namespace

RunConfig parse_config(const std::string& text) {
  ConfigReader reader(text);
  RunConfig config;

  const std::string mode = reader.get_string("run", "mode", "");
  if (mode == "simulate") {
    config.mode = RunMode::simulate;
  } else if (mode == "mms-converge") {
    config.mode = RunMode::mms_converge;
  } else if (mode == "stability") {
    config.mode = RunMode::stability;
  } else if (mode == "info") {
    config.mode = RunMode::info;
  } else if (mode.empty()) {
    reader.issues.push_back("[run] mode is required (simulate | mms-converge | stability | info)");
  } else {
    reader.issues.push_back("[run] mode '" + mode + "' is not one of simulate, mms-converge, "
                            "stability, info");
  }

  config.n_per_side = reader.get_int("mesh", "n_per_side", 16);
  if (config.n_per_side < 1) reader.issues.push_back("[mesh] n_per_side must be >= 1");

  config.tau = reader.get_double("time", "tau", 0.01);
  config.t_final = reader.get_double("time", "t_final", 1.0);

  config.params.alpha = reader.get_double("params", "alpha", 1.0);
  config.params.beta = reader.get_double("params", "beta", 0.5);
  config.params.gamma = reader.get_double("params", "gamma", 1.0);
  config.params.delta = reader.get_double("params", "delta", 1.2);
  config.params.epsilon = reader.get_double("params", "epsilon", 0.1);
  config.params.lambda = reader.get_double("params", "lambda", 1.0);
  config.params.theta_c = reader.get_double("params", "theta_c", 0.0);
  config.params.kappa = reader.get_double("params", "kappa", 0.01);
  config.params.phi_gel = reader.get_double("params", "phi_gel", 0.5);
  config.params.young_modulus = reader.get_double("params", "young_modulus", 1.0);
  config.params.poisson_ratio = reader.get_double("params", "poisson_ratio", 0.3);
  config.params.zeta = reader.get_double("params", "zeta", 1.0);

  const std::string kind = reader.get_string("source", "kind", "none");
  if (kind == "none") {
    config.source.kind = SourceKind::none;
  } else if (kind == "fixed_gaussian") {
    config.source.kind = SourceKind::fixed_gaussian;
  } else if (kind == "path_gaussian" || kind == "y_path") {
    config.source.kind = SourceKind::path_gaussian;
  } else {
    reader.issues.push_back("[source] kind '" + kind +
                            "' is not one of none, fixed_gaussian, y_path");
  }
  config.source.intensity = reader.get_double("source", "intensity", 0.0);
  config.source.width = reader.get_double("source", "width", 1.0);
  config.source.center[0] = reader.get_double("source", "center_x", 0.5);
  config.source.center[1] = reader.get_double("source", "center_y", 0.5);
  if (kind == "y_path" || kind == "path_gaussian") {
    config.source = y_path(config.source.intensity, config.source.width);
  }

  config.init_phi.text = reader.get_string("init", "phi", "constant:-1");
  config.init_theta.text = reader.get_string("init", "theta", "constant:0");
  const std::string init_mode = reader.get_string("init", "mode", "nodal");
  if (init_mode == "nodal") {
    config.init_mode = InitMode::nodal;
  } else if (init_mode == "ritz") {
    config.init_mode = InitMode::ritz;
  } else {
    reader.issues.push_back("[init] mode '" + init_mode + "' is not one of nodal, ritz");
  }

  config.output.directory = reader.get_string("output", "directory", "out");
  config.output.snapshot_stride = reader.get_int("output", "snapshot_stride", 0);
  const std::string formats = reader.get_string("output", "format", "csv");
  config.output.formats.clear();
  {
    std::istringstream in(formats);
    std::string token;
    while (std::getline(in, token, ',')) {
      token = trim(token);
      if (token == "csv") {
        config.output.formats.push_back(FieldFormat::csv);
      } else if (token == "vtk" || token == "vtk_legacy") {
        config.output.formats.push_back(FieldFormat::vtk_legacy);
      } else if (!token.empty()) {
        reader.issues.push_back("[output] format '" + token + "' is not one of csv, vtk_legacy");
      }
    }
  }

  config.solver.rel_tolerance = reader.get_double("solver", "rel_tolerance", 1e-10);
  config.solver.max_iterations = reader.get_int("solver", "max_iterations", 10000);
  const std::string precond = reader.get_string("solver", "preconditioner", "jacobi");
  if (precond == "jacobi") {
    config.solver.preconditioner = Preconditioner::jacobi;
  } else if (precond == "none") {
    config.solver.preconditioner = Preconditioner::none;
  } else {
    reader.issues.push_back("[solver] preconditioner '" + precond +
                            "' is not one of jacobi, none");
  }
  const std::string algorithm = reader.get_string("solver", "algorithm", "elimination");
  if (algorithm == "elimination") {
    config.algorithm = StepAlgorithm::elimination;
  } else if (algorithm == "monolithic") {
    config.algorithm = StepAlgorithm::monolithic;
  } else {
    reader.issues.push_back("[solver] algorithm '" + algorithm +
                            "' is not one of elimination, monolithic");
  }

  config.elasticity_stride = reader.get_int("elasticity", "stride", 1);
  if (config.elasticity_stride < 1) reader.issues.push_back("[elasticity] stride must be >= 1");

  const std::string sweep = reader.get_string("mms", "sweep", "both");
  config.mms.spatial = sweep == "both" || sweep == "spatial";
  config.mms.temporal = sweep == "both" || sweep == "temporal";
  if (!config.mms.spatial && !config.mms.temporal && sweep != "none") {
    reader.issues.push_back("[mms] sweep '" + sweep +
                            "' is not one of spatial, temporal, both, none");
  }
  config.mms.paper_scale = reader.get_string("mms", "paper_scale", "false") == "true";
  for (double v : reader.get_list("mms", "spatial_ns")) {
    config.mms.spatial_ns.push_back(static_cast<int>(v));
  }
  config.mms.spatial_taus = reader.get_list("mms", "spatial_taus");
  for (double v : reader.get_list("mms", "temporal_ns")) {
    config.mms.temporal_ns.push_back(static_cast<int>(v));
  }
  config.mms.temporal_taus = reader.get_list("mms", "temporal_taus");

  config.stability_seed =
      static_cast<unsigned>(reader.get_int("stability", "seed", 42));

  reader.report_unknown();

  // semantic validation
  if (config.solver.rel_tolerance <= 0.0) {
    reader.issues.push_back("[solver] rel_tolerance must be > 0");
  }
  if (config.solver.max_iterations < 1) {
    reader.issues.push_back("[solver] max_iterations must be >= 1");
  }
  if (config.mode == RunMode::simulate || config.mode == RunMode::stability) {
    try {
      step_count(config.t_final, config.tau);
    } catch (const std::exception& e) {
      reader.issues.push_back(std::string("[time] ") + e.what());
    }
    for (const auto& issue : validate_source(config.source, config.t_final)) {
      reader.issues.push_back("[source] " + issue);
    }
  }
  {
    const MaterialLaws laws = default_laws(config.params);
    for (const auto& violation : validate(config.params, laws)) {
      reader.issues.push_back("[params] " + violation);
    }
  }
  try {
    make_init_field(config.init_phi);
    make_init_field(config.init_theta);
  } catch (const ConfigError& e) {
    for (const auto& issue : e.issues()) reader.issues.push_back("[init] " + issue);
  }

  if (!reader.issues.empty()) throw ConfigError(reader.issues);
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file '" + path + "'"});
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace slafem
