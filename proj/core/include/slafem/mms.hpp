#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "slafem/model.hpp"
#include "slafem/sav.hpp"
#include "slafem/solver.hpp"

namespace slafem {

/// Closed-form exact fields and the residual source terms that make them
/// solve the forced system. All functions take (x, y, t).
struct ManufacturedCase {
  ModelParams params;
  MaterialLaws laws;
  std::function<double(double, double, double)> exact_phi;
  std::function<double(double, double, double)> exact_theta;
  std::function<double(double, double, double)> exact_u1;
  std::function<double(double, double, double)> exact_u2;
  std::function<double(double, double, double)> src_phi;
  std::function<double(double, double, double)> src_theta;
  std::function<double(double, double, double)> src_u1;
  std::function<double(double, double, double)> src_u2;
};

ManufacturedCase build_case(const ModelParams& params);

struct ErrorEntry {
  double h = 0.0;
  double tau = 0.0;
  // max over time levels 1..N of the spatial norms against the nodal
  // interpolants of the exact fields
  double phi_l2 = 0.0, phi_h1 = 0.0;
  double theta_l2 = 0.0, theta_h1 = 0.0;
  double u_l2 = 0.0, u_h1 = 0.0;
};

struct FittedOrders {
  double phi_l2 = 0.0, phi_h1 = 0.0;
  double theta_l2 = 0.0, theta_h1 = 0.0;
  double u_l2 = 0.0, u_h1 = 0.0;
};

struct SeriesOrders {
  double fixed_value = 0.0;  // the tau (spatial sweep) or h (temporal sweep) held fixed
  FittedOrders orders;
};

enum class SweepDirection { spatial, temporal };

struct ErrorReport {
  SweepDirection direction = SweepDirection::spatial;
  std::vector<ErrorEntry> entries;
  std::vector<SeriesOrders> series;  // one fitted-order set per fixed value
};

/// Least-squares slope of log(error) vs log(parameter) over the last
/// n_fit points (default 3, the asymptotic tail).
double fit_order(std::span<const double> params, std::span<const double> errors, int n_fit = 3);

/// One forced run to t_final; errors are maxima over time levels of the
/// norms against nodal interpolants of the exact fields.
ErrorEntry run_case(const ManufacturedCase& mcase, int n_per_side, double tau, double t_final,
                    const SolverConfig& config);

ErrorReport spatial_sweep(const ManufacturedCase& mcase, const std::vector<double>& taus,
                          const std::vector<int>& ns, double t_final, const SolverConfig& config,
                          const std::function<void(const ErrorEntry&)>& progress = {});
ErrorReport temporal_sweep(const ManufacturedCase& mcase, const std::vector<int>& ns,
                           const std::vector<double>& taus, double t_final,
                           const SolverConfig& config,
                           const std::function<void(const ErrorEntry&)>& progress = {});

std::string report_table(const ErrorReport& report);

}  // namespace slafem
