// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned here.
// Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "support/oracles.hpp"
#include "support/studies.hpp"
#include "tumorsim/cahn_hilliard.hpp"
#include "tumorsim/config.hpp"
#include "tumorsim/limit.hpp"
#include "tumorsim/mms.hpp"
#include "tumorsim/nutrient.hpp"
#include "tumorsim/operators.hpp"
#include "tumorsim/transport.hpp"

using namespace tumorsim;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kPhiOpen = 0.0;           // phi in (0, 1) strictly
constexpr double kNutrientTol = 1e-8;      // n in [-tol, 1 + tol]
constexpr double kDivTol = 1e-8;           // max |div u - S_T|
constexpr double kEnergyRoundoff = 1e-12;  // per-step allowance, decoupled run
constexpr double kResidualRatio = 1.7;     // energy-balance residual, dt vs dt/2
constexpr double kOracleTol = 1e-6;
constexpr double kOrderLo = 1.8, kOrderHi = 2.2;
constexpr double kCurlOrder = 1.5;
constexpr double kBoundsSeconds = 60.0, kMmsSeconds = 10.0, kLimitSeconds = 120.0;

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& o) {
  std::printf("[%s] criterion %2d: %s -- %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

template <typename F>
Outcome guarded(F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

double rms_residual(const std::vector<DiagnosticsRecord>& recs) {
  double s = 0.0;
  for (const auto& r : recs) s += r.energy_balance_residual * r.energy_balance_residual;
  return std::sqrt(s / double(recs.size()));
}

// The spinodal run: defaults of RunConfig (64^2 cells, h = 1, dt = 5e-4,
// T = 0.1, spinodal phi0 = 0.5 +- 0.05, P0 = 0.25, default parameters).
RunConfig bound_run_config(const fs::path& out) {
  RunConfig c;
  c.output_dir = out.string();
  return c;
}

struct TimedRun {
  RunResult result;
  double seconds;
  std::string csv;
};

TimedRun timed_run(const RunConfig& c) {
  const auto t0 = std::chrono::steady_clock::now();
  RunResult r = execute_run(c);
  const double s = seconds_since(t0);
  return {std::move(r), s, read_file(fs::path(c.output_dir) / "diagnostics.csv")};
}

}  // namespace

int main() {
  const fs::path work = fs::temp_directory_path() / "tumorsim_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  std::optional<TimedRun> base;
  const RunConfig base_cfg = bound_run_config(work / "run_a");
  std::string base_error;
  try {
    base = timed_run(base_cfg);
  } catch (const std::exception& e) {
    base_error = e.what();
  }

  report(1, "bounds on the 64^2 spinodal run", guarded([&]() -> Outcome {
    if (!base) return {false, "run failed: " + base_error};
    const double dt = base_cfg.dt;
    double phi_lo = 1, phi_hi = 0, p_lo = 1, p_hi = 0, n_lo = 1, n_hi = 0;
    for (const auto& r : base->result.records) {
      phi_lo = std::min(phi_lo, r.phi_min), phi_hi = std::max(phi_hi, r.phi_max);
      p_lo = std::min(p_lo, r.p_min), p_hi = std::max(p_hi, r.p_max);
      n_lo = std::min(n_lo, r.n_min), n_hi = std::max(n_hi, r.n_max);
    }
    const bool ok = base->result.records.size() == 200 && phi_lo > kPhiOpen && phi_hi < 1.0 - kPhiOpen &&
                    p_lo >= 0.0 && p_hi <= 1.0 + 10 * dt * dt && n_lo >= -kNutrientTol &&
                    n_hi <= 1.0 + kNutrientTol && base->seconds < kBoundsSeconds;
    return {ok, fmt("%zu steps, phi in [%.6f, %.6f], P in [%.6f, %.6f], n in [%.6f, %.6f], %.1f s (limit %.0f s)",
                    base->result.records.size(), phi_lo, phi_hi, p_lo, p_hi, n_lo, n_hi, base->seconds,
                    kBoundsSeconds)};
  }));

  report(2, "divergence constraint on every flow solve", guarded([&]() -> Outcome {
    if (!base) return {false, "run failed: " + base_error};
    double worst = 0.0;
    for (const auto& r : base->result.records) worst = std::max(worst, r.div_residual);
    return {worst <= kDivTol, fmt("max |div u - S_T| = %.3e (limit %.0e)", worst, kDivTol)};
  }));

  report(3, "decoupled energy non-increasing over 100 steps", guarded([&]() -> Outcome {
    const GridSpec g(64, 64, 64.0, 64.0);
    ModelParams m;  // delta = 0
    Simulation sim(g, m, RunMode::Decoupled);
    SimState s = sim.initial_state(make_initial_field(InitialCondition::spinodal(0.5, 0.05, 3), g), ScalarField(g));
    double e = sim.energy(s), worst = -INFINITY;
    for (int k = 1; k <= 100; ++k) {
      auto r = sim.step(s, 1e-2, k);
      worst = std::max(worst, r.record.energy - e);
      e = r.record.energy;
      s = std::move(r.state);
    }
    return {worst <= kEnergyRoundoff, fmt("max E(n+1) - E(n) = %.3e (allowance %.0e)", worst, kEnergyRoundoff)};
  }));

  report(4, "energy-balance residual first order under dt halving", guarded([&]() -> Outcome {
    if (!base) return {false, "run failed: " + base_error};
    RunConfig half = base_cfg;
    half.dt = base_cfg.dt / 2;
    half.output_dir = (work / "run_half").string();
    const TimedRun h = timed_run(half);
    const double a = rms_residual(base->result.records), b = rms_residual(h.result.records);
    return {a / b >= kResidualRatio,
            fmt("rms residual %.4e (dt) vs %.4e (dt/2), ratio %.3f (need >= %.1f)", a, b, a / b, kResidualRatio)};
  }));

  report(5, "agreement with dense brute-force oracles on 8^2", guarded([&]() -> Outcome {
    const GridSpec g(8, 8, 8.0, 8.0);
    ModelParams m;
    m.newton_tol = m.picard_tol = 1e-13;
    m.lin_tol = 1e-14;
    auto field = [&](std::uint64_t seed, double mean, double amp) {
      return make_initial_field(InitialCondition::spinodal(mean, amp, seed), g);
    };
    // Cahn-Hilliard step with velocity and source, delta = 0.1.
    ModelParams md = m;
    md.delta = 0.1;
    FaceVectorField u(g);
    {  // face samples drawn on grids shaped like the x- and y-face arrays
      const auto ux = make_initial_field(InitialCondition::spinodal(0.0, 0.5, 2), GridSpec(9, 8, 1, 1));
      const auto uy = make_initial_field(InitialCondition::spinodal(0.0, 0.5, 3), GridSpec(8, 9, 1, 1));
      u.x() = ux.values();
      u.y() = uy.values();
    }
    const CHStepInput in{field(4, 0.5, 0.2), field(5, 0.0, 0.5), u, field(6, 0.0, 0.3), 0.01, md};
    const auto ch = ch_step(in);
    const Eigen::VectorXd ch_ref = oracle::ch_step(
        g, {oracle::vec(in.phi_old), oracle::vec(in.mu_old), oracle::vec(u), oracle::vec(in.st_field), in.dt, md.eps,
            md.theta, md.delta});
    double e_ch = std::max((ch.phi.values().matrix() - ch_ref.head(64)).lpNorm<Eigen::Infinity>(),
                           (ch.mu.values().matrix() - ch_ref.tail(64)).lpNorm<Eigen::Infinity>());
    // Transport step.
    const auto p = field(7, 0.3, 0.2), phi = field(8, 0.7, 0.2), n = field(9, 0.5, 0.4);
    const double dt_tr = 0.5 * transport_admissible_dt(u, m);
    const auto tr = transport_step(p, u, phi, n, dt_tr, m);
    const double e_tr = (tr.values().matrix() - oracle::transport(g, oracle::vec(p), oracle::vec(u), oracle::vec(phi),
                                                                  oracle::vec(n), dt_tr, m))
                            .lpNorm<Eigen::Infinity>();
    // Nutrient.
    const auto nut = solve_nutrient(p, phi, m, 1e-14);
    const double e_nu =
        (nut.n.values().matrix() - oracle::nutrient(g, oracle::vec(p), oracle::vec(phi), m)).lpNorm<Eigen::Infinity>();
    // Full coupled step against the monolithic fixed point.
    Simulation sim(g, m);
    SimState s = sim.initial_state(field(10, 0.5, 0.1), field(11, 0.25, 0.05));
    oracle::CoupledState o{oracle::vec(s.phi), oracle::vec(s.mu), oracle::vec(s.pi),
                           oracle::vec(s.p),   oracle::vec(s.n),  oracle::vec(s.u)};
    s = sim.step(s, 0.01, 1).state;
    o = oracle::coupled_step(g, o, 0.01, m);
    double e_full = 0.0;
    for (auto [a, b] : {std::pair{&s.phi, &o.phi}, {&s.mu, &o.mu}, {&s.pi, &o.pi}, {&s.p, &o.p}, {&s.n, &o.n}}) {
      e_full = std::max(e_full, (a->values().matrix() - *b).lpNorm<Eigen::Infinity>());
    }
    const double worst = std::max({e_ch, e_tr, e_nu, e_full});
    return {worst <= kOracleTol, fmt("max deviation: ch_step %.1e, transport %.1e, nutrient %.1e, coupled %.1e (tol %.0e)",
                                     e_ch, e_tr, e_nu, e_full, kOracleTol)};
  }));

  report(6, "manufactured-solution convergence order", guarded([&]() -> Outcome {
    const auto t0 = std::chrono::steady_clock::now();
    const auto cases = run_mms_suite({16, 32, 64});
    const double secs = seconds_since(t0);
    bool ok = secs < kMmsSeconds;
    std::string d;
    for (const auto& c : cases) {
      for (double o : c.orders) ok = ok && o >= kOrderLo && o <= kOrderHi;
      d += fmt("%s %.3f/%.3f, ", c.name.c_str(), c.orders[0], c.orders[1]);
    }
    return {ok, d + fmt("%.2f s (limit %.0f s)", secs, kMmsSeconds)};
  }));

  report(7, "vanishing-interface sweep", guarded([&]() -> Outcome {
    const GridSpec g(64, 64, 1.0, 1.0);
    ModelParams m;
    m.theta = 1.0;
    const auto phi0 = ScalarField::sample(g, [](double x, double y) {
      return 0.5 + 0.3 * std::cos(std::numbers::pi * x) * std::cos(2 * std::numbers::pi * y);
    });
    const LimitConfig lc{g, m, 0.1, 1e-3, phi0};
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = run_limit_study({0.2, 0.1, 0.05}, lc);
    const double secs = seconds_since(t0);
    bool u_dec = true, d_dec = true, f_dec = true;
    for (std::size_t k = 1; k < rep.rows.size(); ++k) {
      u_dec = u_dec && rep.rows[k].l2_u_spacetime < rep.rows[k - 1].l2_u_spacetime;
      d_dec = d_dec && rep.rows[k].dist_to_limit < rep.rows[k - 1].dist_to_limit;
    }
    for (std::size_t k = 1; k < rep.limit.energy.size(); ++k) f_dec = f_dec && rep.limit.energy[k] <= rep.limit.energy[k - 1];
    std::string d = "|u|:";
    for (const auto& r : rep.rows) d += fmt(" %.3e", r.l2_u_spacetime);
    d += ", dist:";
    for (const auto& r : rep.rows) d += fmt(" %.3e", r.dist_to_limit);
    d += fmt(", int F %s, %.1f s (limit %.0f s)", f_dec ? "non-increasing" : "INCREASES", secs, kLimitSeconds);
    return {u_dec && d_dec && f_dec && secs < kLimitSeconds, d};
  }));

  report(8, "curl identity consistency order", guarded([&]() -> Outcome {
    const std::vector<int> cells{16, 32, 64};
    std::vector<double> errs;
    for (int n : cells) errs.push_back(study::curl_error(n));
    const auto orders = study::observed_orders(cells, errs);
    bool ok = true;
    for (double o : orders) ok = ok && o >= kCurlOrder;
    return {ok, fmt("errors %.3e %.3e %.3e, orders %.3f %.3f (need >= %.1f)", errs[0], errs[1], errs[2], orders[0],
                    orders[1], kCurlOrder)};
  }));

  report(9, "regularized scheme consistency as delta -> 0", guarded([&]() -> Outcome {
    const GridSpec g(32, 32, 32.0, 32.0);
    const auto phi0 = make_initial_field(InitialCondition::spinodal(0.5, 0.05, 5), g);
    const ScalarField p0(g, 0.25);
    struct Member {
      ScalarField phi;
      double kappa;
    };
    auto member = [&](double delta) {
      ModelParams m;
      m.delta = delta;
      Simulation sim(g, m);
      double kappa = INFINITY;
      auto obs = [&](const SimState& s, const DiagnosticsRecord&, bool) {
        kappa = std::min({kappa, s.phi.min(), 1.0 - s.phi.max()});
      };
      auto r = run(sim, sim.initial_state(phi0, p0), RunSchedule{0.05, 5e-4, 0}, obs);
      return Member{r.state.phi, kappa};
    };
    const Member a = member(1e-2), b = member(1e-3), z = member(0.0);
    auto dist = [&](const ScalarField& x, const ScalarField& y) {
      return l2_norm(ScalarField(g, x.values() - y.values()));
    };
    const double d_a = dist(a.phi, z.phi), d_b = dist(b.phi, z.phi);
    const bool ok = d_b < d_a && a.kappa > 0.0 && b.kappa > 0.0;
    return {ok, fmt("d(1e-2, 0) = %.4e, d(1e-3, 0) = %.4e, kappa = %.4f (delta 1e-2), %.4f (delta 1e-3)", d_a, d_b,
                    a.kappa, b.kappa)};
  }));

  report(10, "bit-identical diagnostics across invocations", guarded([&]() -> Outcome {
    if (!base) return {false, "run failed: " + base_error};
    RunConfig again = base_cfg;
    again.output_dir = (work / "run_b").string();
    const TimedRun b = timed_run(again);
    const bool same = !base->csv.empty() && base->csv == b.csv;
    return {same, fmt("%zu bytes each, %s", base->csv.size(), same ? "identical" : "DIFFER")};
  }));

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
