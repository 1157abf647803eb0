#include "slafem/mms.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "slafem/fem.hpp"

namespace slafem {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

ManufacturedCase build_case(const ModelParams& params) {
  ManufacturedCase mcase;
  mcase.params = params;
  mcase.laws = default_laws(params);

  // phi = cos t cos(2 pi x) cos(pi y)
  // theta = sin t cos(pi x) cos(2 pi y)
  // u = (sin t sin(pi x) sin(2 pi y), cos t sin(2 pi x) sin(pi y))
  mcase.exact_phi = [](double x, double y, double t) {
    return std::cos(t) * std::cos(2 * kPi * x) * std::cos(kPi * y);
  };
  mcase.exact_theta = [](double x, double y, double t) {
    return std::sin(t) * std::cos(kPi * x) * std::cos(2 * kPi * y);
  };
  mcase.exact_u1 = [](double x, double y, double t) {
    return std::sin(t) * std::sin(kPi * x) * std::sin(2 * kPi * y);
  };
  mcase.exact_u2 = [](double x, double y, double t) {
    return std::cos(t) * std::sin(2 * kPi * x) * std::sin(kPi * y);
  };

  const ModelParams pr = params;
  const MaterialLaws laws = mcase.laws;

  // residual of the phase equation: alpha phi_t - lambda eps lap(phi)
  //   + (lambda/eps) W'(phi) + gamma (theta - theta_c) p(phi)
  mcase.src_phi = [pr, laws](double x, double y, double t) {
    const double phi = std::cos(t) * std::cos(2 * kPi * x) * std::cos(kPi * y);
    const double phi_t = -std::sin(t) * std::cos(2 * kPi * x) * std::cos(kPi * y);
    const double lap_phi = -5.0 * kPi * kPi * phi;
    const double theta = std::sin(t) * std::cos(kPi * x) * std::cos(2 * kPi * y);
    return pr.alpha * phi_t - pr.lambda * pr.epsilon * lap_phi +
           pr.lambda / pr.epsilon * laws.W_prime(phi) +
           pr.gamma * (theta - pr.theta_c) * laws.p(phi);
  };

  // residual of the heat equation: delta theta_t - gamma p(phi) phi_t - lap(theta)
  mcase.src_theta = [pr, laws](double x, double y, double t) {
    const double phi = std::cos(t) * std::cos(2 * kPi * x) * std::cos(kPi * y);
    const double phi_t = -std::sin(t) * std::cos(2 * kPi * x) * std::cos(kPi * y);
    const double theta = std::sin(t) * std::cos(kPi * x) * std::cos(2 * kPi * y);
    const double theta_t = std::cos(t) * std::cos(kPi * x) * std::cos(2 * kPi * y);
    const double lap_theta = -5.0 * kPi * kPi * theta;
    return pr.delta * theta_t - pr.gamma * laws.p(phi) * phi_t - lap_theta;
  };

  // residual of the momentum balance: -div(c(phi) C1 (E(u) + (beta theta - m(phi)) I))
  // with c = kappa + k(phi)(1-kappa); theta0 = theta(.,0) = 0
  auto div_stress = [pr, laws](double x, double y, double t) -> std::array<double, 2> {
    const LameConstants lame = lame_constants(pr.young_modulus, pr.poisson_ratio);
    const double lam = lame.lambda, mu = lame.mu;
    const double st = std::sin(t), ct = std::cos(t);
    const double spx = std::sin(kPi * x), cpx = std::cos(kPi * x);
    const double s2x = std::sin(2 * kPi * x), c2x = std::cos(2 * kPi * x);
    const double spy = std::sin(kPi * y), cpy = std::cos(kPi * y);
    const double s2y = std::sin(2 * kPi * y), c2y = std::cos(2 * kPi * y);

    const double phi = ct * c2x * cpy;
    const double phi_x = -2 * kPi * ct * s2x * cpy;
    const double phi_y = -kPi * ct * c2x * spy;
    const double theta = st * cpx * c2y;
    const double theta_x = -kPi * st * spx * c2y;
    const double theta_y = -2 * kPi * st * cpx * s2y;

    // strains and their first derivatives
    const double e11 = kPi * st * cpx * s2y;
    const double e22 = kPi * ct * s2x * cpy;
    const double e12 = kPi * st * spx * c2y + kPi * ct * c2x * spy;  // (u1_y + u2_x)/2
    const double e11_x = -kPi * kPi * st * spx * s2y;
    const double e11_y = 2 * kPi * kPi * st * cpx * c2y;
    const double e22_x = 2 * kPi * kPi * ct * c2x * cpy;
    const double e22_y = -kPi * kPi * ct * s2x * spy;
    const double e12_x = kPi * kPi * st * cpx * c2y - 2 * kPi * kPi * ct * s2x * spy;
    const double e12_y = -2 * kPi * kPi * st * spx * s2y + kPi * kPi * ct * c2x * cpy;

    // stiffness interpolation: piecewise-linear ramp, derivative taken
    // one-sided at the kinks (a null set)
    const double c = pr.kappa + laws.k(phi) * (1.0 - pr.kappa);
    double k_prime = 0.0;
    if (phi > pr.phi_gel && phi < 1.0) k_prime = 1.0 / (1.0 - pr.phi_gel);
    const double c_prime = (1.0 - pr.kappa) * k_prime;

    const double trace_coeff = 2.0 * lam + 2.0 * mu;  // C1 I for d = 2
    const double m_phi = laws.m(phi);
    const double m_prime = 0.5 * pr.zeta;
    const double iso = trace_coeff * (pr.beta * theta - m_phi);
    const double iso_x = trace_coeff * (pr.beta * theta_x - m_prime * phi_x);
    const double iso_y = trace_coeff * (pr.beta * theta_y - m_prime * phi_y);

    const double tr = e11 + e22;
    const double T11 = lam * tr + 2 * mu * e11 + iso;
    const double T22 = lam * tr + 2 * mu * e22 + iso;
    const double T12 = 2 * mu * e12;
    const double T11_x = lam * (e11_x + e22_x) + 2 * mu * e11_x + iso_x;
    const double T22_y = lam * (e11_y + e22_y) + 2 * mu * e22_y + iso_y;
    const double T12_x = 2 * mu * e12_x;
    const double T12_y = 2 * mu * e12_y;

    return {c_prime * (phi_x * T11 + phi_y * T12) + c * (T11_x + T12_y),
            c_prime * (phi_x * T12 + phi_y * T22) + c * (T12_x + T22_y)};
  };

  mcase.src_u1 = [div_stress](double x, double y, double t) { return -div_stress(x, y, t)[0]; };
  mcase.src_u2 = [div_stress](double x, double y, double t) { return -div_stress(x, y, t)[1]; };

  return mcase;
}

double fit_order(std::span<const double> params, std::span<const double> errors, int n_fit) {
  if (params.size() != errors.size() || params.size() < 2) {
    throw std::invalid_argument("fit_order: need at least two matching points");
  }
  const int count = std::min<int>(n_fit, static_cast<int>(params.size()));
  const std::size_t begin = params.size() - static_cast<std::size_t>(count);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = begin; i < params.size(); ++i) {
    const double lx = std::log(params[i]);
    const double ly = std::log(std::max(errors[i], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = count * sxx - sx * sx;
  return (count * sxy - sx * sy) / denom;
}

ErrorEntry run_case(const ManufacturedCase& mcase, int n_per_side, double tau, double t_final,
                    const SolverConfig& config) {
  FemSpace space = make_space(build_uniform(n_per_side));
  SavSolver solver(space, mcase.params, mcase.laws, config);
  const SparseMatrix& M = solver.mass();
  const SparseMatrix& S = solver.stiffness();

  // errors are measured against nodal interpolants of the exact fields
  ScalarField phi0{[&](double x, double y) { return mcase.exact_phi(x, y, 0.0); }, nullptr};
  ScalarField theta0{[&](double x, double y) { return mcase.exact_theta(x, y, 0.0); }, nullptr};

  auto loads_at = [&](double t) {
    StepLoads loads;
    loads.phi_load = solver.source_load(mcase.src_phi, t);
    loads.heat_load = solver.source_load(mcase.src_theta, t);
    const std::vector<double> f1 = solver.source_load(mcase.src_u1, t);
    const std::vector<double> f2 = solver.source_load(mcase.src_u2, t);
    loads.body_load.assign(static_cast<std::size_t>(2 * space.n_dofs), 0.0);
    for (int i = 0; i < space.n_dofs; ++i) {
      loads.body_load[static_cast<std::size_t>(2 * i)] = f1[static_cast<std::size_t>(i)];
      loads.body_load[static_cast<std::size_t>(2 * i + 1)] = f2[static_cast<std::size_t>(i)];
    }
    return loads;
  };

  State state = solver.initialize(phi0, theta0, InitMode::nodal, loads_at(0.0));

  ErrorEntry entry;
  entry.h = space.mesh.h;
  entry.tau = tau;

  RunHooks hooks;
  hooks.on_step = [&](int, const State& s, const EnergyRecord&) {
    std::vector<double> err_phi(static_cast<std::size_t>(space.n_dofs));
    std::vector<double> err_theta(static_cast<std::size_t>(space.n_dofs));
    std::vector<double> err_u1(static_cast<std::size_t>(space.n_dofs));
    std::vector<double> err_u2(static_cast<std::size_t>(space.n_dofs));
    for (int i = 0; i < space.n_dofs; ++i) {
      const auto& p = space.mesh.nodes[static_cast<std::size_t>(i)];
      const std::size_t si = static_cast<std::size_t>(i);
      err_phi[si] = s.phi[si] - mcase.exact_phi(p[0], p[1], s.t);
      err_theta[si] = s.theta[si] - mcase.exact_theta(p[0], p[1], s.t);
      err_u1[si] = s.u[static_cast<std::size_t>(2 * i)] - mcase.exact_u1(p[0], p[1], s.t);
      err_u2[si] = s.u[static_cast<std::size_t>(2 * i + 1)] - mcase.exact_u2(p[0], p[1], s.t);
    }
    const FieldNorms np = norms(M, S, err_phi);
    const FieldNorms nt = norms(M, S, err_theta);
    const FieldNorms n1 = norms(M, S, err_u1);
    const FieldNorms n2 = norms(M, S, err_u2);
    entry.phi_l2 = std::max(entry.phi_l2, np.l2);
    entry.phi_h1 = std::max(entry.phi_h1, np.h1_semi);
    entry.theta_l2 = std::max(entry.theta_l2, nt.l2);
    entry.theta_h1 = std::max(entry.theta_h1, nt.h1_semi);
    entry.u_l2 = std::max(entry.u_l2, std::hypot(n1.l2, n2.l2));
    entry.u_h1 = std::max(entry.u_h1, std::hypot(n1.h1_semi, n2.h1_semi));
  };

  solver.run(state, t_final, tau, loads_at, hooks, 1);
  return entry;
}

namespace {

ErrorReport sweep(SweepDirection direction, const ManufacturedCase& mcase,
                  const std::vector<double>& fixed_values, const std::vector<double>& varied,
                  const std::vector<int>& ns_for_varied, double t_final,
                  const SolverConfig& config,
                  const std::function<void(const ErrorEntry&)>& progress) {
  ErrorReport report;
  report.direction = direction;
  for (std::size_t f = 0; f < fixed_values.size(); ++f) {
    std::vector<double> xs;
    std::vector<ErrorEntry> line;
    for (std::size_t v = 0; v < varied.size(); ++v) {
      ErrorEntry entry;
      if (direction == SweepDirection::spatial) {
        entry = run_case(mcase, ns_for_varied[v], fixed_values[f], t_final, config);
      } else {
        entry = run_case(mcase, ns_for_varied[f], varied[v], t_final, config);
      }
      xs.push_back(varied[v]);
      line.push_back(entry);
      report.entries.push_back(entry);
      if (progress) progress(entry);
    }
    SeriesOrders orders;
    orders.fixed_value = fixed_values[f];
    auto fit = [&](auto member) {
      std::vector<double> es;
      es.reserve(line.size());
      for (const auto& e : line) es.push_back(e.*member);
      return fit_order(xs, es);
    };
    orders.orders.phi_l2 = fit(&ErrorEntry::phi_l2);
    orders.orders.phi_h1 = fit(&ErrorEntry::phi_h1);
    orders.orders.theta_l2 = fit(&ErrorEntry::theta_l2);
    orders.orders.theta_h1 = fit(&ErrorEntry::theta_h1);
    orders.orders.u_l2 = fit(&ErrorEntry::u_l2);
    orders.orders.u_h1 = fit(&ErrorEntry::u_h1);
    report.series.push_back(orders);
  }
  return report;
}

}  // namespace

ErrorReport spatial_sweep(const ManufacturedCase& mcase, const std::vector<double>& taus,
                          const std::vector<int>& ns, double t_final, const SolverConfig& config,
                          const std::function<void(const ErrorEntry&)>& progress) {
  std::vector<double> hs;
  hs.reserve(ns.size());
  for (int n : ns) hs.push_back(1.0 / n);
  return sweep(SweepDirection::spatial, mcase, taus, hs, ns, t_final, config, progress);
}

ErrorReport temporal_sweep(const ManufacturedCase& mcase, const std::vector<int>& ns,
                           const std::vector<double>& taus, double t_final,
                           const SolverConfig& config,
                           const std::function<void(const ErrorEntry&)>& progress) {
  std::vector<double> fixed;
  fixed.reserve(ns.size());
  for (int n : ns) fixed.push_back(1.0 / n);
  ErrorReport report = sweep(SweepDirection::temporal, mcase, fixed, taus, ns, t_final, config,
                             progress);
  return report;
}

std::string report_table(const ErrorReport& report) {
  std::ostringstream out;
  const bool spatial = report.direction == SweepDirection::spatial;
  out << (spatial ? "spatial sweep (varying h)\n" : "temporal sweep (varying tau)\n");
  char line[256];
  std::snprintf(line, sizeof line, "%10s %10s %12s %12s %12s %12s %12s %12s\n", "h", "tau",
                "phi_L2", "phi_H1", "theta_L2", "theta_H1", "u_L2", "u_H1");
  out << line;
  for (const auto& e : report.entries) {
    std::snprintf(line, sizeof line, "%10.5f %10.5f %12.4e %12.4e %12.4e %12.4e %12.4e %12.4e\n",
                  e.h, e.tau, e.phi_l2, e.phi_h1, e.theta_l2, e.theta_h1, e.u_l2, e.u_h1);
    out << line;
  }
  for (const auto& s : report.series) {
    std::snprintf(line, sizeof line,
                  "fitted orders (last 3 points) at %s=%.5f: phi %.2f/%.2f  theta %.2f/%.2f  u "
                  "%.2f/%.2f  (L2/H1)\n",
                  spatial ? "tau" : "h", s.fixed_value, s.orders.phi_l2, s.orders.phi_h1,
                  s.orders.theta_l2, s.orders.theta_h1, s.orders.u_l2, s.orders.u_h1);
    out << line;
  }
  return out.str();
}

}  // namespace slafem
