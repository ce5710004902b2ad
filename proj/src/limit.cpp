#include "tumorsim/limit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <ostream>
#include <sstream>
#include <string>

#include "tumorsim/cahn_hilliard.hpp"
#include "tumorsim/operators.hpp"
#include "tumorsim/simulate.hpp"

namespace tumorsim {

namespace {

void require_convex(const ModelParams& p) {
  if (!(p.theta < 2.0)) {
    std::ostringstream os;
    os << "vanishing-interface study needs a strictly convex potential (theta < 2), got theta = " << p.theta;
    throw ConvexityViolation(os.str());
  }
}

long step_count(const LimitConfig& c) {
  if (!(c.T >= 0.0) || !(c.dt > 0.0)) throw Error("limit run needs T >= 0 and dt > 0");
  return std::lround(c.T / c.dt);
}

struct MemberRun {
  LimitRow row;
  ScalarField phi_final;
};

MemberRun run_member(double eps, const LimitConfig& config) {
  ModelParams params = config.params;
  params.eps = eps;
  params.delta = 0.0;
  BoundarySpec bc = BoundarySpec::singular_limit();
  bc.pi = config.pressure_bc;
  Simulation sim(config.grid, params, RunMode::Limit, bc);
  SimState state = sim.initial_state(config.phi0, ScalarField(config.grid));

  const double vol = config.grid.cell_volume();
  const double dt = config.dt;
  LimitRow row;
  row.eps = eps;
  double curl_sq = 0.0;
  double l2u_sq = 0.0;
  const long steps = step_count(config);
  for (long k = 1; k <= steps; ++k) {
    auto res = sim.step(state, dt, int(k));
    if (res.picard_stalled) throw PicardStall("Picard coupling stalled in limit run, eps = " + std::to_string(eps));
    state = std::move(res.state);
    l2u_sq += dt * face_norm_sq(state.u);
    const Eigen::ArrayXd mismatch = curl_at_nodes(state.u) - node_jacobian(state.mu, state.phi);
    curl_sq += dt * mismatch.square().sum() * vol;
    const auto lap = laplacian(state.phi, bc.phi);
    row.int_eps_lap_phi_sq += dt * eps * eps * cell_inner(lap, lap);
    row.int_grad_phi_sq += dt * face_norm_sq(gradient_to_faces(state.phi, bc.phi));
    row.max_div = std::max(row.max_div, divergence_from_faces(state.u).values().abs().maxCoeff());
  }
  row.l2_u_spacetime = std::sqrt(l2u_sq);
  row.curl_residual = std::sqrt(curl_sq);
  return {row, std::move(state.phi)};
}

}  // namespace

LimitSystemResult run_limit_system(const LimitConfig& config) {
  require_convex(config.params);
  ModelParams params = config.params;
  params.eps = 0.0;
  params.delta = 0.0;
  const GridSpec& g = config.grid;
  const BoundarySpec bc{};
  const long steps = step_count(config);

  LimitSystemResult out;
  ScalarField phi = config.phi0;
  phi.values() = phi.values().max(params.clamp_margin).min(1.0 - params.clamp_margin);
  ScalarField mu(g);
  out.trajectory.push_back(phi);
  out.energy.push_back(free_energy(phi, params, bc.phi));
  for (long k = 1; k <= steps; ++k) {
    CHStepInput in{phi, mu, FaceVectorField(g), ScalarField(g), config.dt, params, bc};
    auto res = ch_step(in);
    phi = std::move(res.phi);
    mu = std::move(res.mu);
    out.trajectory.push_back(phi);
    out.energy.push_back(free_energy(phi, params, bc.phi));
  }
  return out;
}

LimitReport run_limit_study(const std::vector<double>& eps_list, const LimitConfig& config) {
  require_convex(config.params);
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw Error("eps values must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) throw Error("eps list must be strictly decreasing");
  }
  std::vector<std::future<MemberRun>> jobs;
  for (double eps : eps_list) {
    jobs.push_back(std::async(std::launch::async, [eps, &config] { return run_member(eps, config); }));
  }
  LimitReport report;
  report.limit = run_limit_system(config);
  const ScalarField& reference = report.limit.trajectory.back();
  for (auto& j : jobs) {
    MemberRun m = j.get();
    ScalarField diff(config.grid, m.phi_final.values() - reference.values());
    m.row.dist_to_limit = l2_norm(diff);
    report.rows.push_back(m.row);
  }
  return report;
}

void write_limit_table(std::ostream& os, const LimitReport& report) {
  os << "eps,l2_u_spacetime,curl_residual,int_eps_lap_phi_sq,int_grad_phi_sq,dist_to_limit\n";
  char buf[256];
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.eps, r.l2_u_spacetime,
                  r.curl_residual, r.int_eps_lap_phi_sq, r.int_grad_phi_sq, r.dist_to_limit);
    os << buf;
  }
}

}  // namespace tumorsim
