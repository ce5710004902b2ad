#pragma once

#include <string>
#include <vector>

#include "tumorsim/grid.hpp"

namespace tumorsim {

/// Singular potential F = C + B with C(s) = s ln s + (1-s) ln(1-s) and the
/// concave quadratic B(s) = theta s (1-s).
struct PotentialSpec {
  double theta = 2.5;
  /// Newton iterates are kept in [clamp_margin, 1 - clamp_margin].
  double clamp_margin = 1e-9;
};

/// Model constants. The mitotic rate and the nutrient uptake rate are fixed to 1.
struct ModelParams {
  double lambda1 = 1.0;  // apoptosis
  double lambda2 = 1.0;  // necrosis
  double lambda3 = 1.0;  // lysing of dead cells
  double nu1 = 1.0;      // nutrient transfer, host region
  double nu2 = 1.0;      // nutrient transfer, tumor region
  double n_c = 0.5;      // capillary nutrient level
  double n_N = 0.4;      // necrotic threshold
  double theta = 2.5;
  double eps = 1.0;      // interface coefficient
  double delta = 0.0;    // viscous regularization
  double sigmaH = 0.05;  // width of the smoothed Heaviside
  double clamp_margin = 1e-9;
  double picard_tol = 1e-10;
  int picard_max_iter = 50;
  double newton_tol = 1e-9;
  int newton_max_iter = 50;
  double lin_tol = 1e-10;
  double cfl = 0.25;
  /// Passes of the source map per step; 1 keeps sources lagged.
  int source_iterations = 1;

  PotentialSpec potential() const { return {theta, clamp_margin}; }
  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

double potential_value(double phi, const PotentialSpec& p);
double potential_dC(double phi);
double potential_dB(double phi, const PotentialSpec& p);
double potential_d2(double phi, const PotentialSpec& p);
/// C''(phi) = 1 / (phi (1 - phi)), the Newton weight of the implicit part.
double potential_d2C(double phi);

/// Logistic sigmoid 1 / (1 + exp(-s / sigmaH)).
double heaviside_smooth(double s, double sigmaH);
/// Cubic smoothstep of phi clamped to [0, 1].
double q_interp(double phi);

/// Net tumor source n P - lambda3 (phi - P).
double source_st(double n, double p, double phi, const ModelParams& m);
/// Dead-cell source (lambda1 + lambda2 H(n_N - n)) P - lambda3 (phi - P).
double source_sd(double n, double p, double phi, const ModelParams& m);
/// Nonnegative capillary transfer coefficient nu1 (1 - Q) + nu2 Q.
double transfer_coefficient(double phi, const ModelParams& m);
double nutrient_tc(double n, double phi, const ModelParams& m);

ScalarField source_st(const ScalarField& n, const ScalarField& p, const ScalarField& phi,
                      const ModelParams& m);

struct Violation {
  std::string tag;
  std::string message;
};

std::vector<Violation> validate(const ModelParams& m);
std::vector<Violation> validate(const ModelParams& m, const ScalarField& phi0, const ScalarField& p0);

/// Joins violations into one multi-line message; empty if none.
std::string describe(const std::vector<Violation>& v);

}  // namespace tumorsim
