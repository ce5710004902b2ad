#include "tumorsim/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tumorsim/cahn_hilliard.hpp"
#include "tumorsim/flow.hpp"
#include "tumorsim/nutrient.hpp"
#include "tumorsim/operators.hpp"
#include "tumorsim/transport.hpp"

namespace tumorsim {

std::string to_string(RunMode m) {
  switch (m) {
    case RunMode::Full: return "full";
    case RunMode::Decoupled: return "decoupled";
    case RunMode::Limit: return "limit";
  }
  return "?";
}

RunMode run_mode_from_string(const std::string& s) {
  if (s == "full") return RunMode::Full;
  if (s == "decoupled") return RunMode::Decoupled;
  if (s == "limit") return RunMode::Limit;
  throw Error("unknown run mode '" + s + "' (expected full, decoupled or limit)");
}

Simulation::Simulation(GridSpec grid, ModelParams params, RunMode mode)
    : Simulation(grid, params, mode, mode == RunMode::Limit ? BoundarySpec::singular_limit() : BoundarySpec{}) {}

Simulation::Simulation(GridSpec grid, ModelParams params, RunMode mode, BoundarySpec bc)
    : grid_(grid), params_(params), mode_(mode), bc_(bc) {
  if (auto v = validate(params_); !v.empty()) throw ValidationError(describe(v));
}

double Simulation::energy(const SimState& s) const { return free_energy(s.phi, params_, bc_.phi); }

SimState Simulation::initial_state(const ScalarField& phi0, const ScalarField& p0) const {
  const double m = params_.clamp_margin;
  SimState s{0.0, phi0, ScalarField(grid_), ScalarField(grid_), p0, ScalarField(grid_, 1.0),
             FaceVectorField(grid_)};
  s.phi.values() = s.phi.values().max(m).min(1.0 - m);
  if (params_.delta == 0.0) {
    const auto lap = laplacian(s.phi, bc_.phi);
    const PotentialSpec pot = params_.potential();
    for (Eigen::Index k = 0; k < grid_.cells(); ++k) {
      s.mu[k] = -params_.eps * params_.eps * lap[k] + potential_dC(s.phi[k]) + potential_dB(s.phi[k], pot);
    }
  }
  if (mode_ == RunMode::Decoupled) {
    s.n = solve_nutrient(s.p, s.phi, params_, params_.lin_tol, bc_).n;
    return s;
  }
  ScalarField st(grid_);
  if (mode_ == RunMode::Full) {
    s.n = solve_nutrient(s.p, s.phi, params_, params_.lin_tol, bc_).n;
    st = source_st(s.n, s.p, s.phi, params_);
  }
  auto flow = solve_darcy(s.mu, s.phi, st, bc_, params_.lin_tol);
  s.pi = std::move(flow.pi);
  s.u = std::move(flow.u);
  return s;
}

namespace {

double mass_ledger(const SimState& prev, const SimState& next, const ScalarField& st, double dt,
                   const ModelParams& params, const BoundarySpec& bc) {
  const double source = cell_inner(prev.phi, st);
  const double advected = boundary_outflow(face_product(next.u, face_average(prev.phi, bc.phi)));
  const double diffused = boundary_outflow(gradient_to_faces(next.mu, bc.mu));
  double ledger = integrate(next.phi) - integrate(prev.phi) - dt * (source - advected + diffused);
  if (params.delta != 0.0) {
    ScalarField dmu(next.mu.grid());
    dmu.values() = next.mu.values() - prev.mu.values();
    ledger -= params.delta * boundary_outflow(gradient_to_faces(dmu, bc.mu));
  }
  return ledger;
}

}  // namespace

StepResult Simulation::step(const SimState& state, double dt, int step_index) const {
  if (!(dt > 0.0)) throw Error("time step must be positive");
  StepResult out{state, {}, {}, false};
  SimState& next = out.state;
  int newton_total = 0;
  int picard_total = 0;
  double div_residual = 0.0;
  ScalarField st(grid_);

  // Sources are evaluated from (src_p, src_phi); the first pass uses the
  // start-of-step state, later passes the previous pass's end state.
  ScalarField src_p = state.p;
  ScalarField src_phi = state.phi;
  for (int pass = 0; pass < params_.source_iterations; ++pass) {
    if (mode_ == RunMode::Full) {
      next.n = solve_nutrient(src_p, src_phi, params_, params_.lin_tol, bc_).n;
      st = source_st(next.n, src_p, src_phi, params_);
    }

    CHStepInput in{state.phi, state.mu, FaceVectorField(grid_), st, dt, params_, bc_};
    out.picard_increments.clear();
    out.picard_stalled = false;
    if (mode_ == RunMode::Decoupled) {
      auto ch = ch_step(in);
      next.phi = std::move(ch.phi);
      next.mu = std::move(ch.mu);
      next.u = FaceVectorField(grid_);
      next.pi = ScalarField(grid_);
      newton_total += ch.report.iterations;
      picard_total += 1;
    } else {
      ScalarField phi_it = state.phi;
      ScalarField mu_it = state.mu;
      std::optional<ScalarField> pi_guess = state.pi;
      bool converged = false;
      for (int k = 0; k < params_.picard_max_iter; ++k) {
        auto flow = solve_darcy(mu_it, phi_it, st, bc_, params_.lin_tol, pi_guess);
        in.u = flow.u;
        in.phi_guess = phi_it;
        in.mu_guess = mu_it;
        auto ch = ch_step(in);
        newton_total += ch.report.iterations;
        ++picard_total;
        const double inc = (ch.phi.values() - phi_it.values()).abs().maxCoeff();
        out.picard_increments.push_back(inc);
        phi_it = std::move(ch.phi);
        mu_it = std::move(ch.mu);
        next.u = std::move(flow.u);
        next.pi = std::move(flow.pi);
        pi_guess = next.pi;
        div_residual = std::max(div_residual, flow.div_residual);
        if (inc < params_.picard_tol) {
          converged = true;
          break;
        }
      }
      out.picard_stalled = !converged;
      next.phi = std::move(phi_it);
      next.mu = std::move(mu_it);
    }

    if (mode_ == RunMode::Full) {
      next.p = transport_step(state.p, next.u, state.phi, next.n, dt, params_, bc_);
    }
    src_p = next.p;
    src_phi = next.phi;
  }
  next.t = state.t + dt;

  DiagnosticsRecord& r = out.record;
  r.step = step_index;
  r.t = next.t;
  r.energy = energy(next);
  r.energy_balance_residual = energy_balance_residual(state, next, dt, params_, bc_);
  r.phi_min = next.phi.min();
  r.phi_max = next.phi.max();
  r.p_min = next.p.min();
  r.p_max = next.p.max();
  r.n_min = next.n.min();
  r.n_max = next.n.max();
  r.l2_u = std::sqrt(face_norm_sq(next.u));
  r.div_residual = div_residual;
  r.mass_phi = integrate(next.phi);
  r.mass_ledger_residual = mass_ledger(state, next, st, dt, params_, bc_);
  r.picard_iters = picard_total;
  r.newton_iters = newton_total;
  return out;
}

double energy_balance_residual(const SimState& prev, const SimState& next, double dt,
                               const ModelParams& params, const BoundarySpec& bc) {
  const double de = (free_energy(next.phi, params, bc.phi) - free_energy(prev.phi, params, bc.phi)) / dt;
  const double dissipation = face_norm_sq(gradient_to_faces(next.mu, bc.mu)) + face_norm_sq(next.u);
  const double work = cell_inner(next.pi, divergence_from_faces(next.u));
  return de + dissipation - work;
}

bool BoundsReport::pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

std::string BoundsReport::summary() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.pass ? "ok   " : "FAIL ") << c.tag << ": " << c.field << " in [" << c.min << ", " << c.max
       << "], allowed " << (c.strict ? "(" : "[") << c.lower << ", " << c.upper << (c.strict ? ")" : "]")
       << '\n';
  }
  os << "dead fraction min " << phi_d_min << (phi_d_negative ? " (negative)" : "") << ", host fraction min "
     << phi_h_min << '\n';
  return os.str();
}

BoundsReport check_bounds(const SimState& s, double dt, double tol) {
  BoundsReport rep;
  auto add = [&](const char* field, const char* tag, const ScalarField& f, double lo, double hi, bool strict) {
    BoundCheck c{field, tag, f.min(), f.max(), lo, hi, strict, true};
    c.pass = f.all_finite() && (strict ? (c.min > lo && c.max < hi) : (c.min >= lo && c.max <= hi));
    rep.checks.push_back(c);
  };
  add("phi", "phase-field bound 0 < phi < 1", s.phi, 0.0, 1.0, true);
  add("p", "viable-cell bound 0 <= P <= 1", s.p, 0.0, 1.0 + 10.0 * dt * dt, false);
  add("n", "nutrient bound 0 <= n <= 1", s.n, -tol, 1.0 + tol, false);
  rep.phi_d_min = (s.phi.values() - s.p.values()).minCoeff();
  rep.phi_h_min = 1.0 - s.phi.max();
  rep.phi_d_negative = rep.phi_d_min < -tol;
  return rep;
}

RunResult run(const Simulation& sim, SimState initial, const RunSchedule& schedule,
              const StepObserver& observer) {
  if (!(schedule.T >= 0.0) || !(schedule.dt > 0.0)) throw Error("run needs T >= 0 and dt > 0");
  const long steps = std::lround(schedule.T / schedule.dt);
  RunResult out{std::move(initial), {}};
  out.records.reserve(std::size_t(steps));
  for (long k = 1; k <= steps; ++k) {
    StepResult res = [&] {
      try {
        return sim.step(out.state, schedule.dt, int(k));
      } catch (const std::exception& e) {
        std::ostringstream os;
        os << "step " << k << " (t = " << out.state.t << ") failed: " << e.what();
        throw RunAborted(os.str(), int(k));
      }
    }();
    if (res.picard_stalled) {
      std::ostringstream os;
      os << "step " << k << " (t = " << out.state.t << "): Picard coupling did not contract below "
         << sim.params().picard_tol << " in " << sim.params().picard_max_iter << " sweeps (last increment "
         << (res.picard_increments.empty() ? 0.0 : res.picard_increments.back()) << ")";
      throw PicardStall(os.str());
    }
    out.state = std::move(res.state);
    out.records.push_back(res.record);
    if (observer) {
      const bool snap = schedule.snapshot_every > 0 && k % schedule.snapshot_every == 0;
      observer(out.state, res.record, snap);
    }
  }
  return out;
}

}  // namespace tumorsim
