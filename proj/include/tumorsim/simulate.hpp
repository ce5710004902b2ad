#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tumorsim/grid.hpp"
#include "tumorsim/physics.hpp"

namespace tumorsim {

/// full: all four equations. decoupled: Cahn-Hilliard only, u = 0 and
/// S_T = 0 (n and P are frozen). limit: S_T = S_D = 0 with an impermeable
/// boundary for the flow; n and P are frozen.
enum class RunMode { Full, Decoupled, Limit };

std::string to_string(RunMode m);
RunMode run_mode_from_string(const std::string& s);

struct SimState {
  double t = 0.0;
  ScalarField phi;
  ScalarField mu;
  ScalarField pi;
  ScalarField p;
  ScalarField n;
  FaceVectorField u;
};

struct DiagnosticsRecord {
  int step = 0;
  double t = 0.0;
  double energy = 0.0;
  double energy_balance_residual = 0.0;
  double phi_min = 0.0;
  double phi_max = 0.0;
  double p_min = 0.0;
  double p_max = 0.0;
  double n_min = 0.0;
  double n_max = 0.0;
  double l2_u = 0.0;
  /// max |div u - S_T| over every flow solve of the step
  double div_residual = 0.0;
  double mass_phi = 0.0;
  double mass_ledger_residual = 0.0;
  int picard_iters = 0;
  int newton_iters = 0;
};

struct StepResult {
  SimState state;
  DiagnosticsRecord record;
  /// max |phi^(k+1) - phi^(k)| for every Picard sweep of the last source pass.
  std::vector<double> picard_increments;
  bool picard_stalled = false;
};

class Simulation {
 public:
  Simulation(GridSpec grid, ModelParams params, RunMode mode = RunMode::Full);
  Simulation(GridSpec grid, ModelParams params, RunMode mode, BoundarySpec bc);

  const GridSpec& grid() const { return grid_; }
  const ModelParams& params() const { return params_; }
  RunMode mode() const { return mode_; }
  const BoundarySpec& bc() const { return bc_; }

  /// Initial state at t = 0. phi0 is clamped into the potential domain.
  /// mu0 = -eps^2 lap(phi0) + F'(phi0) when delta = 0, and mu0 = 0 otherwise.
  SimState initial_state(const ScalarField& phi0, const ScalarField& p0) const;

  /// One time step: nutrient, sources, Picard-coupled flow / Cahn-Hilliard,
  /// transport, diagnostics. A Picard stall is reported in the result, not thrown.
  StepResult step(const SimState& state, double dt, int step_index = 0) const;

  double energy(const SimState& s) const;

 private:
  GridSpec grid_;
  ModelParams params_;
  RunMode mode_;
  BoundarySpec bc_;
};

/// (E(next) - E(prev))/dt + |grad mu|^2 + |u|^2 - <Pi, div u>, all at next.
double energy_balance_residual(const SimState& prev, const SimState& next, double dt,
                               const ModelParams& params, const BoundarySpec& bc = {});

struct BoundCheck {
  std::string field;
  std::string tag;
  double min = 0.0;
  double max = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool strict = false;
  bool pass = true;
};

struct BoundsReport {
  std::vector<BoundCheck> checks;
  /// Dead-cell fraction phi - P and host fraction 1 - phi.
  double phi_d_min = 0.0;
  double phi_h_min = 0.0;
  /// phi - P < -tol somewhere; reported, not a failure.
  bool phi_d_negative = false;
  bool pass() const;
  std::string summary() const;
};

/// phi in (0, 1) strictly, P in [0, 1 + 10 dt^2], n in [-tol, 1 + tol].
BoundsReport check_bounds(const SimState& s, double dt, double tol = 1e-8);

struct RunSchedule {
  double T = 0.0;
  double dt = 1e-3;
  /// Observer snapshot cadence in steps; 0 disables snapshots.
  int snapshot_every = 0;
};

struct RunResult {
  SimState state;
  std::vector<DiagnosticsRecord> records;
};

/// Called after every accepted step; `snapshot` is true on the cadence.
using StepObserver = std::function<void(const SimState&, const DiagnosticsRecord&, bool snapshot)>;

/// Fixed-dt time loop from the given state to T. Any step error (including a
/// Picard stall) aborts with the step index and time in the message.
RunResult run(const Simulation& sim, SimState initial, const RunSchedule& schedule,
              const StepObserver& observer = {});

class RunAborted : public Error {
 public:
  RunAborted(const std::string& what, int step) : Error(what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

}  // namespace tumorsim
