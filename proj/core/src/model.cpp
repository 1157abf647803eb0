#include "slafem/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace slafem {

MaterialLaws default_laws(const ModelParams& params) {
  const double phi_gel = params.phi_gel;
  const double zeta = params.zeta;
  MaterialLaws laws;
  laws.W = [](double s) {
    const double t = s * s - 1.0;
    return 0.25 * t * t;
  };
  laws.W_prime = [](double s) { return s * (s * s - 1.0); };
  // linear interpolation potential with the constant extensions outside
  // [-1,1]; the derivative vanishes there, which pins the sol phase at -1
  // and keeps the drive off once fully cured
  laws.P = [](double s) {
    if (s <= -1.0) return 1.0;
    if (s >= 1.0) return 0.0;
    return 0.5 * (1.0 - s);
  };
  laws.p = [](double s) { return s >= -1.0 && s <= 1.0 ? -0.5 : 0.0; };
  // ramp from the gel point, clamped so phi overshoots never leave [0,1]
  laws.k = [phi_gel](double s) {
    if (s <= phi_gel) return 0.0;
    if (s >= 1.0) return 1.0;
    return (s - phi_gel) / (1.0 - phi_gel);
  };
  laws.m = [zeta](double s) { return 0.5 * zeta * (1.0 + s); };
  return laws;
}

LameConstants lame_constants(double young_modulus, double poisson_ratio) {
  LameConstants lame;
  lame.lambda = young_modulus * poisson_ratio /
                ((1.0 + poisson_ratio) * (1.0 - 2.0 * poisson_ratio));
  lame.mu = young_modulus / (2.0 * (1.0 + poisson_ratio));
  return lame;
}

Voigt3 gel_elasticity_tensor_2d(const ModelParams& params) {
  const LameConstants lame = lame_constants(params.young_modulus, params.poisson_ratio);
  // quadratic form of the double contraction with strain vector
  // (e11, e22, (e12+e21)/2): the shear diagonal carries the factor 4 mu
  return Voigt3{{{lame.lambda + 2.0 * lame.mu, lame.lambda, 0.0},
                 {lame.lambda, lame.lambda + 2.0 * lame.mu, 0.0},
                 {0.0, 0.0, 4.0 * lame.mu}}};
}

Voigt3 elasticity_tensor_2d(const ModelParams& params, double k_value) {
  if (k_value < 0.0 || k_value > 1.0) {
    throw std::invalid_argument("elasticity_tensor_2d: k_value outside [0,1]");
  }
  Voigt3 C = gel_elasticity_tensor_2d(params);
  const double scale = (1.0 - k_value) * params.kappa + k_value;
  for (auto& row : C) {
    for (double& v : row) v *= scale;
  }
  return C;
}

namespace {

void check(bool ok, const char* message, std::vector<std::string>& out) {
  if (!ok) out.emplace_back(message);
}

}  // namespace

std::vector<std::string> validate(const ModelParams& params, const MaterialLaws& laws) {
  std::vector<std::string> violations;

  check(params.alpha > 0.0, "(A2) alpha must be positive", violations);
  check(params.beta > 0.0, "(A2) beta must be positive", violations);
  check(params.gamma > 0.0, "(A2) gamma must be positive", violations);
  check(params.delta > 0.0, "(A2) delta must be positive", violations);
  check(params.lambda > 0.0, "(A2) lambda must be positive", violations);
  check(params.epsilon > 0.0, "(A2) epsilon must be positive", violations);
  // theta_c enters only through gamma (theta - theta_c) p(phi); the
  // reference simulations use theta_c = 0
  check(params.theta_c >= 0.0, "(A2) theta_c must be nonnegative", violations);
  check(params.kappa > 0.0 && params.kappa < 1.0, "ersatz factor kappa must lie in (0,1)",
        violations);
  check(params.phi_gel > -1.0 && params.phi_gel < 1.0, "gel point must lie in (-1,1)", violations);
  check(params.young_modulus > 0.0, "Young modulus must be positive", violations);
  check(params.poisson_ratio > 0.0 && params.poisson_ratio < 0.5,
        "Poisson ratio must lie in (0,1/2) for plane strain", violations);
  check(params.zeta > 0.0, "maximum shrinkage strain zeta must be positive", violations);

  if (!laws.W || !laws.W_prime || !laws.P || !laws.p || !laws.k || !laws.m) {
    violations.emplace_back("material laws incomplete");
    return violations;
  }

  const int samples = 241;
  auto sample = [&](double lo, double hi, int idx) {
    return lo + (hi - lo) * idx / (samples - 1);
  };

  // (A3): W nonnegative on [-3,3], W'' bounded below by -c3 (c3 = 1 for the
  // quartic), probed by central difference quotients of W'
  bool w_nonneg = true, w_convexity = true;
  const double dh = 1e-4;
  for (int i = 0; i < samples; ++i) {
    const double s = sample(-3.0, 3.0, i);
    if (laws.W(s) < -1e-12) w_nonneg = false;
    const double w2 = (laws.W_prime(s + dh) - laws.W_prime(s - dh)) / (2.0 * dh);
    if (w2 < -1.0 - 1e-6) w_convexity = false;
  }
  check(w_nonneg, "(A3) W must be nonnegative on [-3,3]", violations);
  check(w_convexity, "(A3) W'' must be bounded below by -1 on [-3,3]", violations);

  // (A4): P nonnegative, p bounded
  bool p_nonneg = true, p_bounded = true;
  for (int i = 0; i < samples; ++i) {
    if (laws.P(sample(-3.0, 3.0, i)) < -1e-12) p_nonneg = false;
    if (std::abs(laws.p(sample(-3.0, 3.0, i))) > 1e6) p_bounded = false;
  }
  check(p_nonneg, "(A4) P must be nonnegative", violations);
  check(p_bounded, "(A4) p must be bounded", violations);

  // (A6): k range within [0,1] and the endpoint values
  bool k_range = true;
  for (int i = 0; i < samples; ++i) {
    const double v = laws.k(sample(-3.0, 3.0, i));
    if (v < -1e-12 || v > 1.0 + 1e-12) k_range = false;
  }
  check(k_range, "(A6) k range must be within [0,1]", violations);
  check(std::abs(laws.k(1.0) - 1.0) <= 1e-12, "(A6) k(1) must equal 1", violations);
  check(std::abs(laws.k(-1.0)) <= 1e-12, "(A6) k(-1) must equal 0", violations);

  // (A7): m bounded with bounded difference quotients on [-3,3]
  bool m_bounded = true, m_lipschitz = true;
  for (int i = 0; i < samples; ++i) {
    const double s = sample(-3.0, 3.0, i);
    if (std::abs(laws.m(s)) > 1e9) m_bounded = false;
    const double dq = (laws.m(s + dh) - laws.m(s - dh)) / (2.0 * dh);
    if (std::abs(dq) > 1e9) m_lipschitz = false;
  }
  check(m_bounded, "(A7) m must be bounded on [-3,3]", violations);
  check(m_lipschitz, "(A7) m difference quotients must be bounded on [-3,3]", violations);

  return violations;
}

}  // namespace slafem
