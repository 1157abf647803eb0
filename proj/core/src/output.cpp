#include "slafem/output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace slafem {

namespace {

std::string fmt17(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

std::ofstream open_for_write(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

void write_fields_csv(const State& state, const Mesh& mesh, const std::string& path) {
  const int n = mesh.n_nodes();
  if (static_cast<int>(state.phi.size()) != n || static_cast<int>(state.theta.size()) != n ||
      static_cast<int>(state.u.size()) != 2 * n) {
    throw std::invalid_argument("write_fields_csv: state inconsistent with mesh");
  }
  std::ofstream out = open_for_write(path);
  out << "x,y,phi,theta,ux,uy\n";
  for (int i = 0; i < n; ++i) {
    const std::size_t s = static_cast<std::size_t>(i);
    out << fmt17(mesh.nodes[s][0]) << ',' << fmt17(mesh.nodes[s][1]) << ',' << fmt17(state.phi[s])
        << ',' << fmt17(state.theta[s]) << ',' << fmt17(state.u[2 * s]) << ','
        << fmt17(state.u[2 * s + 1]) << '\n';
  }
}

void write_fields_vtk(const State& state, const Mesh& mesh, const std::string& path) {
  const int n = mesh.n_nodes();
  std::ofstream out = open_for_write(path);
  out << "# vtk DataFile Version 3.0\n";
  out << "slafem fields t=" << fmt17(state.t) << "\n";
  out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << n << " double\n";
  for (int i = 0; i < n; ++i) {
    const std::size_t s = static_cast<std::size_t>(i);
    out << fmt17(mesh.nodes[s][0]) << ' ' << fmt17(mesh.nodes[s][1]) << " 0\n";
  }
  out << "CELLS " << mesh.n_elements() << ' ' << 4 * mesh.n_elements() << '\n';
  for (const auto& elem : mesh.elements) {
    out << "3 " << elem[0] << ' ' << elem[1] << ' ' << elem[2] << '\n';
  }
  out << "CELL_TYPES " << mesh.n_elements() << '\n';
  for (int e = 0; e < mesh.n_elements(); ++e) out << "5\n";
  out << "POINT_DATA " << n << '\n';
  out << "SCALARS phi double 1\nLOOKUP_TABLE default\n";
  for (int i = 0; i < n; ++i) out << fmt17(state.phi[static_cast<std::size_t>(i)]) << '\n';
  out << "SCALARS theta double 1\nLOOKUP_TABLE default\n";
  for (int i = 0; i < n; ++i) out << fmt17(state.theta[static_cast<std::size_t>(i)]) << '\n';
  out << "VECTORS displacement double\n";
  for (int i = 0; i < n; ++i) {
    const std::size_t s = static_cast<std::size_t>(i);
    out << fmt17(state.u[2 * s]) << ' ' << fmt17(state.u[2 * s + 1]) << " 0\n";
  }
}

void write_fields(const State& state, const Mesh& mesh, const std::string& path,
                  FieldFormat format) {
  if (format == FieldFormat::csv) {
    write_fields_csv(state, mesh, path);
  } else {
    write_fields_vtk(state, mesh, path);
  }
}

FieldsCsv read_fields_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  FieldsCsv fields;
  std::string line;
  if (!std::getline(in, line) || line != "x,y,phi,theta,ux,uy") {
    throw std::runtime_error("read_fields_csv: unexpected header in '" + path + "'");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string token;
    double values[6];
    for (double& v : values) {
      if (!std::getline(row, token, ',')) {
        throw std::runtime_error("read_fields_csv: short row in '" + path + "'");
      }
      v = std::stod(token);
    }
    fields.x.push_back(values[0]);
    fields.y.push_back(values[1]);
    fields.phi.push_back(values[2]);
    fields.theta.push_back(values[3]);
    fields.ux.push_back(values[4]);
    fields.uy.push_back(values[5]);
  }
  return fields;
}

void write_energy_series(std::span<const EnergyRecord> records, const std::string& path) {
  std::ofstream out = open_for_write(path);
  out << "t,energy,dissipation,identity_residual\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const double residual =
        i == 0 ? 0.0 : records[i].energy - records[i - 1].energy + records[i].dissipation;
    out << fmt17(records[i].t) << ',' << fmt17(records[i].energy) << ','
        << fmt17(records[i].dissipation) << ',' << fmt17(residual) << '\n';
  }
}

void write_error_csv(const ErrorReport& report, const std::string& path) {
  std::ofstream out = open_for_write(path);
  out << "h,tau,variable,norm,error\n";
  for (const auto& e : report.entries) {
    const std::pair<const char*, double> rows[] = {
        {"phi,l2", e.phi_l2}, {"phi,h1", e.phi_h1},   {"theta,l2", e.theta_l2},
        {"theta,h1", e.theta_h1}, {"u,l2", e.u_l2},   {"u,h1", e.u_h1},
    };
    for (const auto& [label, value] : rows) {
      out << fmt17(e.h) << ',' << fmt17(e.tau) << ',' << label << ',' << fmt17(value) << '\n';
    }
  }
}

void emit_plots(const ErrorReport& report, const std::string& directory) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(directory, ec);

  const bool spatial = report.direction == SweepDirection::spatial;
  const char* axis = spatial ? "h" : "tau";
  const char* variables[] = {"phi", "theta", "u"};
  const char* norms[] = {"l2", "h1"};

  auto value_of = [](const ErrorEntry& e, int var, int norm) {
    switch (var * 2 + norm) {
      case 0: return e.phi_l2;
      case 1: return e.phi_h1;
      case 2: return e.theta_l2;
      case 3: return e.theta_h1;
      case 4: return e.u_l2;
      default: return e.u_h1;
    }
  };

  std::vector<std::string> dat_files;
  for (int var = 0; var < 3; ++var) {
    for (int norm = 0; norm < 2; ++norm) {
      const std::string name =
          std::string(variables[var]) + "_" + norms[norm] + "_vs_" + axis + ".dat";
      std::ofstream out = open_for_write((fs::path(directory) / name).string());
      out << "# " << axis << " error\n";
      for (const auto& e : report.entries) {
        const double x = spatial ? e.h : e.tau;
        out << fmt17(x) << ' ' << fmt17(value_of(e, var, norm)) << '\n';
      }
      dat_files.push_back(name);
    }
  }

  // guide lines anchored at the coarsest point of the first entry
  double x0 = 1.0, e0 = 1.0;
  if (!report.entries.empty()) {
    x0 = spatial ? report.entries.front().h : report.entries.front().tau;
    e0 = report.entries.front().phi_l2;
    if (e0 <= 0.0) e0 = 1.0;
  }

  std::ofstream gp = open_for_write((fs::path(directory) / "rates.gp").string());
  gp << "# gnuplot script; run with: gnuplot rates.gp\n";
  gp << "set logscale xy\nset key left top\nset grid\n";
  gp << "set xlabel '" << axis << "'\nset ylabel 'error'\n";
  gp << "guide1(x) = " << fmt17(e0) << " * (x/" << fmt17(x0) << ")\n";
  gp << "guide2(x) = " << fmt17(e0) << " * (x/" << fmt17(x0) << ")**2\n";
  gp << "set terminal pngcairo size 900,700\n";
  for (const auto& name : dat_files) {
    const std::string png = name.substr(0, name.size() - 4) + ".png";
    gp << "set output '" << png << "'\n";
    gp << "plot '" << name << "' using 1:2 with linespoints title 'error', \\\n"
       << "     guide1(x) with lines dashtype 2 title 'slope 1', \\\n"
       << "     guide2(x) with lines dashtype 3 title 'slope 2'\n";
  }
}

}  // namespace slafem
