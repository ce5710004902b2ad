#pragma once

#include <iosfwd>
#include <vector>

#include "tumorsim/grid.hpp"
#include "tumorsim/physics.hpp"

namespace tumorsim {

/// Vanishing-interface study: S_T = S_D = 0, impermeable boundary for the
/// flow (unless pressure_bc says otherwise), theta < 2 so F is strictly convex.
struct LimitConfig {
  GridSpec grid;
  ModelParams params;
  double T = 0.1;
  double dt = 1e-3;
  ScalarField phi0;
  Bc pressure_bc = Bc::NoFlux;
};

struct LimitRow {
  double eps = 0.0;
  /// sqrt( sum_steps dt |u|^2 )
  double l2_u_spacetime = 0.0;
  /// sqrt( sum_steps dt || curl u - (mu_x phi_y - mu_y phi_x) ||^2 ) over interior nodes
  double curl_residual = 0.0;
  /// sum_steps dt || eps lap(phi) ||^2
  double int_eps_lap_phi_sq = 0.0;
  /// sum_steps dt || grad phi ||^2
  double int_grad_phi_sq = 0.0;
  /// L2 distance of the final phase field to the limit-system solution
  double dist_to_limit = 0.0;
  /// max over steps of max |div u|
  double max_div = 0.0;
};

struct LimitSystemResult {
  /// phase field at t = 0, dt, ..., T
  std::vector<ScalarField> trajectory;
  /// integral of F(phi) at the same instants
  std::vector<double> energy;
};

struct LimitReport {
  std::vector<LimitRow> rows;
  LimitSystemResult limit;
};

/// Nonlinear diffusion phi_t = lap F'(phi) (mu = 0 on the boundary) with the
/// same convex-splitting step as the full model.
LimitSystemResult run_limit_system(const LimitConfig& config);

/// Runs the decoupled phase/flow system for every eps (strictly decreasing,
/// positive) and compares with run_limit_system. Members run concurrently.
LimitReport run_limit_study(const std::vector<double>& eps_list, const LimitConfig& config);

/// Header "eps,l2_u_spacetime,curl_residual,int_eps_lap_phi_sq,int_grad_phi_sq,dist_to_limit".
void write_limit_table(std::ostream& os, const LimitReport& report);

}  // namespace tumorsim
