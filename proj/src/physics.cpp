#include "tumorsim/physics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tumorsim/errors.hpp"

namespace tumorsim {

namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

void require_open_interval(double phi) {
  if (!(phi > 0.0 && phi < 1.0)) {
    std::ostringstream os;
    os << "potential derivative evaluated at " << phi << ", outside (0, 1)";
    throw DomainViolation(os.str());
  }
}

}  // namespace

double potential_value(double phi, const PotentialSpec& p) {
  if (!(phi >= 0.0 && phi <= 1.0)) {
    std::ostringstream os;
    os << "potential evaluated at " << phi << ", outside [0, 1]";
    throw DomainViolation(os.str());
  }
  return xlogx(phi) + xlogx(1.0 - phi) + p.theta * phi * (1.0 - phi);
}

double potential_dC(double phi) {
  require_open_interval(phi);
  return std::log(phi) - std::log1p(-phi);
}

double potential_dB(double phi, const PotentialSpec& p) { return p.theta * (1.0 - 2.0 * phi); }

double potential_d2C(double phi) {
  require_open_interval(phi);
  return 1.0 / (phi * (1.0 - phi));
}

double potential_d2(double phi, const PotentialSpec& p) { return potential_d2C(phi) - 2.0 * p.theta; }

double heaviside_smooth(double s, double sigmaH) { return 1.0 / (1.0 + std::exp(-s / sigmaH)); }

double q_interp(double phi) {
  const double c = std::clamp(phi, 0.0, 1.0);
  return c * c * (3.0 - 2.0 * c);
}

double source_st(double n, double p, double phi, const ModelParams& m) {
  return n * p - m.lambda3 * (phi - p);
}

double source_sd(double n, double p, double phi, const ModelParams& m) {
  return (m.lambda1 + m.lambda2 * heaviside_smooth(m.n_N - n, m.sigmaH)) * p - m.lambda3 * (phi - p);
}

double transfer_coefficient(double phi, const ModelParams& m) {
  const double q = q_interp(phi);
  return m.nu1 * (1.0 - q) + m.nu2 * q;
}

double nutrient_tc(double n, double phi, const ModelParams& m) {
  return transfer_coefficient(phi, m) * (m.n_c - n);
}

ScalarField source_st(const ScalarField& n, const ScalarField& p, const ScalarField& phi,
                      const ModelParams& m) {
  ScalarField out(phi.grid());
  out.values() = n.values() * p.values() - m.lambda3 * (phi.values() - p.values());
  return out;
}

std::vector<Violation> validate(const ModelParams& m) {
  std::vector<Violation> v;
  auto fail = [&](const char* tag, const std::string& what) {
    v.push_back({tag, std::string(tag) + " violated: " + what});
  };
  if (!(m.lambda1 >= 0.0 && m.lambda2 >= 0.0 && m.lambda3 >= 0.0)) {
    fail("death-rates", "lambda_i >= 0 for i = 1, 2, 3");
  }
  if (!(m.nu1 >= 0.0 && m.nu2 >= 0.0)) fail("transfer-rates", "nu1, nu2 >= 0");
  if (!(m.n_c > 0.0 && m.n_c < 1.0)) fail("capillary-level", "0 < n_c < 1");
  if (!(m.n_N >= 0.0 && m.n_N <= 1.0)) fail("necrotic-threshold", "0 <= n_N <= 1");
  if (!(m.eps > 0.0)) fail("interface-coefficient", "eps > 0");
  if (!(m.delta >= 0.0 && m.delta < 0.25)) fail("regularization", "0 <= delta < 1/4");
  if (!(m.sigmaH > 0.0)) fail("heaviside-width", "sigmaH > 0");
  if (!(m.theta >= 0.0) || !std::isfinite(m.theta)) fail("potential", "theta >= 0");
  if (!(m.clamp_margin > 0.0 && m.clamp_margin < 0.5)) fail("potential", "0 < clamp_margin < 1/2");
  if (!(m.cfl > 0.0 && m.cfl <= 1.0)) fail("cfl", "0 < cfl <= 1");
  if (!(m.picard_tol > 0.0 && m.newton_tol > 0.0 && m.lin_tol > 0.0)) {
    fail("solver-tolerances", "picard_tol, newton_tol, lin_tol > 0");
  }
  if (m.picard_max_iter < 1 || m.newton_max_iter < 1 || m.source_iterations < 1) {
    fail("solver-iterations", "iteration limits >= 1");
  }
  return v;
}

std::vector<Violation> validate(const ModelParams& m, const ScalarField& phi0, const ScalarField& p0) {
  auto v = validate(m);
  auto in_unit = [](const ScalarField& f) {
    return f.all_finite() && f.min() >= 0.0 && f.max() <= 1.0;
  };
  if (!in_unit(phi0)) v.push_back({"initial-phi", "initial-phi violated: 0 <= Phi0 <= 1"});
  if (!in_unit(p0)) v.push_back({"initial-p", "initial-p violated: 0 <= P0 <= 1"});
  return v;
}

std::string describe(const std::vector<Violation>& v) {
  std::string out;
  for (const auto& x : v) {
    if (!out.empty()) out += '\n';
    out += x.message;
  }
  return out;
}

}  // namespace tumorsim
