#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace slafem {

/// Physical constants of the phase-field / thermoelastic model. All values
/// nondimensional. The thermal-strain reference temperature is a spatial
/// field and lives in State, not here.
struct ModelParams {
  double alpha = 1.0;       // phase relaxation
  double beta = 0.5;        // thermal expansion
  double gamma = 1.0;       // latent heat
  double delta = 1.2;       // specific heat
  double epsilon = 0.1;     // interface width
  double lambda = 1.0;      // surface tension (capillarity)
  double theta_c = 0.0;     // critical temperature
  double kappa = 0.01;      // ersatz stiffness factor of the sol phase
  double phi_gel = 0.5;     // gel point
  double young_modulus = 1.0;
  double poisson_ratio = 0.3;
  double zeta = 1.0;        // maximum shrinkage strain
};

/// Nonlinear material laws: double well W and derivative, interpolation
/// potential P and derivative p, stiffness ramp k, eigenstrain scalar m.
struct MaterialLaws {
  std::function<double(double)> W;
  std::function<double(double)> W_prime;
  std::function<double(double)> P;
  std::function<double(double)> p;
  std::function<double(double)> k;
  std::function<double(double)> m;
};

/// Quartic double well, linear interpolation potential, gel-point stiffness
/// ramp clamped to [0,1], linear shrinkage eigenstrain.
MaterialLaws default_laws(const ModelParams& params);

using Voigt3 = std::array<std::array<double, 3>, 3>;

struct LameConstants {
  double lambda = 0.0;
  double mu = 0.0;
};

LameConstants lame_constants(double young_modulus, double poisson_ratio);

/// Plane-strain elasticity matrix [(1-k)kappa + k] * C1 in the Voigt
/// convention with strain vector (e11, e22, (e12+e21)/2); the resulting
/// matrix is the quadratic form of the double contraction, so the shear
/// diagonal is 4 mu.
Voigt3 elasticity_tensor_2d(const ModelParams& params, double k_value);

/// Voigt matrix of the full-stiffness gel tensor C1 alone.
Voigt3 gel_elasticity_tensor_2d(const ModelParams& params);

/// Samples the numerically checkable parts of the model assumptions;
/// returns human-readable violations, empty when valid.
std::vector<std::string> validate(const ModelParams& params, const MaterialLaws& laws);

}  // namespace slafem
