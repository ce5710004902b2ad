#include "tumorsim/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>

#include "tumorsim/snapshot.hpp"

namespace tumorsim {

InitialCondition InitialCondition::uniform(double v) {
  InitialCondition ic;
  ic.kind = Kind::Uniform;
  ic.value = v;
  return ic;
}

InitialCondition InitialCondition::spinodal(double mean, double amp, std::uint64_t seed) {
  InitialCondition ic;
  ic.kind = Kind::Spinodal;
  ic.mean = mean;
  ic.amp = amp;
  ic.seed = seed;
  return ic;
}

InitialCondition InitialCondition::file(std::string path) {
  InitialCondition ic;
  ic.kind = Kind::File;
  ic.path = std::move(path);
  return ic;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  return out;
}

std::vector<std::string> words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

double to_double(const std::string& s, int line) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw ParseError("line " + std::to_string(line) + ": expected a number, got '" + s + "'", line);
  }
  return v;
}

template <typename Int>
Int to_int(const std::string& s, int line) {
  Int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw ParseError("line " + std::to_string(line) + ": expected an integer, got '" + s + "'", line);
  }
  return v;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

InitialCondition parse_initial(const std::string& value, int line) {
  const auto w = words(value);
  if (!w.empty() && w[0] == "uniform" && w.size() == 2) return InitialCondition::uniform(to_double(w[1], line));
  if (!w.empty() && w[0] == "spinodal" && w.size() == 4) {
    return InitialCondition::spinodal(to_double(w[1], line), to_double(w[2], line),
                                      to_int<std::uint64_t>(w[3], line));
  }
  if (!w.empty() && w[0] == "file") {
    const std::string path = trim(value.substr(value.find("file") + 4));
    if (!path.empty()) return InitialCondition::file(path);
  }
  throw ParseError("line " + std::to_string(line) +
                       ": initial data must be 'uniform <v>', 'spinodal <mean> <amp> <seed>' or 'file <path>'",
                   line);
}

std::string format_initial(const InitialCondition& ic) {
  switch (ic.kind) {
    case InitialCondition::Kind::Uniform: return "uniform " + fmt(ic.value);
    case InitialCondition::Kind::Spinodal:
      return "spinodal " + fmt(ic.mean) + " " + fmt(ic.amp) + " " + std::to_string(ic.seed);
    case InitialCondition::Kind::File: return "file " + ic.path;
  }
  return {};
}

using Setter = std::function<void(RunConfig&, const std::string&, int)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct Key {
  Setter set;
  Getter get;
};

Key real(double RunConfig::*f) {
  return {[f](RunConfig& c, const std::string& v, int l) { c.*f = to_double(v, l); },
          [f](const RunConfig& c) { return fmt(c.*f); }};
}
Key integer(int RunConfig::*f) {
  return {[f](RunConfig& c, const std::string& v, int l) { c.*f = to_int<int>(v, l); },
          [f](const RunConfig& c) { return std::to_string(c.*f); }};
}
Key real_param(double ModelParams::*f) {
  return {[f](RunConfig& c, const std::string& v, int l) { c.params.*f = to_double(v, l); },
          [f](const RunConfig& c) { return fmt(c.params.*f); }};
}
Key int_param(int ModelParams::*f) {
  return {[f](RunConfig& c, const std::string& v, int l) { c.params.*f = to_int<int>(v, l); },
          [f](const RunConfig& c) { return std::to_string(c.params.*f); }};
}

// Section -> ordered key table. The order is the serialization order.
const std::vector<std::pair<std::string, std::vector<std::pair<std::string, Key>>>>& schema() {
  static const std::vector<std::pair<std::string, std::vector<std::pair<std::string, Key>>>> s = {
      {"grid",
       {{"nx", integer(&RunConfig::nx)},
        {"ny", integer(&RunConfig::ny)},
        {"lx", real(&RunConfig::lx)},
        {"ly", real(&RunConfig::ly)}}},
      {"time",
       {{"T", real(&RunConfig::T)},
        {"dt", real(&RunConfig::dt)},
        {"snapshot_every", integer(&RunConfig::snapshot_every)}}},
      {"params",
       {{"lambda1", real_param(&ModelParams::lambda1)},
        {"lambda2", real_param(&ModelParams::lambda2)},
        {"lambda3", real_param(&ModelParams::lambda3)},
        {"nu1", real_param(&ModelParams::nu1)},
        {"nu2", real_param(&ModelParams::nu2)},
        {"n_c", real_param(&ModelParams::n_c)},
        {"n_N", real_param(&ModelParams::n_N)},
        {"theta", real_param(&ModelParams::theta)},
        {"eps", real_param(&ModelParams::eps)},
        {"delta", real_param(&ModelParams::delta)},
        {"sigmaH", real_param(&ModelParams::sigmaH)},
        {"clamp_margin", real_param(&ModelParams::clamp_margin)},
        {"picard_tol", real_param(&ModelParams::picard_tol)},
        {"picard_max_iter", int_param(&ModelParams::picard_max_iter)},
        {"newton_tol", real_param(&ModelParams::newton_tol)},
        {"newton_max_iter", int_param(&ModelParams::newton_max_iter)},
        {"lin_tol", real_param(&ModelParams::lin_tol)},
        {"cfl", real_param(&ModelParams::cfl)},
        {"source_iterations", int_param(&ModelParams::source_iterations)}}},
      {"initial",
       {{"phi", {[](RunConfig& c, const std::string& v, int l) { c.phi0 = parse_initial(v, l); },
                 [](const RunConfig& c) { return format_initial(c.phi0); }}},
        {"p", {[](RunConfig& c, const std::string& v, int l) { c.p0 = parse_initial(v, l); },
               [](const RunConfig& c) { return format_initial(c.p0); }}}}},
      {"run",
       {{"mode", {[](RunConfig& c, const std::string& v, int l) {
                    try {
                      c.mode = run_mode_from_string(v);
                    } catch (const Error& e) {
                      throw ParseError("line " + std::to_string(l) + ": " + e.what(), l);
                    }
                  },
                  [](const RunConfig& c) { return to_string(c.mode); }}},
        {"output_dir", {[](RunConfig& c, const std::string& v, int) { c.output_dir = v; },
                        [](const RunConfig& c) { return c.output_dir; }}}}},
      {"limit",
       {{"eps_list", {[](RunConfig& c, const std::string& v, int l) {
                        c.eps_list.clear();
                        for (const auto& item : split(v, ',')) c.eps_list.push_back(to_double(item, l));
                      },
                      [](const RunConfig& c) {
                        std::string s;
                        for (std::size_t i = 0; i < c.eps_list.size(); ++i) {
                          if (i) s += ", ";
                          s += fmt(c.eps_list[i]);
                        }
                        return s;
                      }}}}},
  };
  return s;
}

const Key* find_key(const std::string& section, const std::string& key) {
  for (const auto& [name, keys] : schema()) {
    if (name != section) continue;
    for (const auto& [k, entry] : keys) {
      if (k == key) return &entry;
    }
  }
  return nullptr;
}

bool known_section(const std::string& section) {
  for (const auto& [name, keys] : schema()) {
    if (name == section) return true;
  }
  return false;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::istringstream is(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    auto where = [&] { return "line " + std::to_string(line) + ": "; };
    if (s.front() == '[') {
      if (s.back() != ']') throw ParseError(where() + "unterminated section header", line);
      section = trim(s.substr(1, s.size() - 2));
      if (!known_section(section)) throw ParseError(where() + "unknown section [" + section + "]", line);
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError(where() + "expected 'key = value'", line);
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (section.empty()) throw ParseError(where() + "key '" + key + "' outside any section", line);
    const Key* k = find_key(section, key);
    if (!k) throw ParseError(where() + "unknown key '" + key + "' in [" + section + "]", line);
    if (value.empty()) throw ParseError(where() + "missing value for '" + key + "'", line);
    k->set(c, value, line);
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

std::string serialize(const RunConfig& c) {
  std::string out;
  for (const auto& [section, keys] : schema()) {
    if (!out.empty()) out += '\n';
    out += "[" + section + "]\n";
    for (const auto& [k, entry] : keys) out += k + " = " + entry.get(c) + '\n';
  }
  return out;
}

ScalarField make_initial_field(const InitialCondition& ic, const GridSpec& grid,
                               const std::filesystem::path& base_dir) {
  switch (ic.kind) {
    case InitialCondition::Kind::Uniform: return ScalarField(grid, ic.value);
    case InitialCondition::Kind::Spinodal: {
      std::linear_congruential_engine<std::uint64_t, 6364136223846793005ULL, 1442695040888963407ULL, 0> rng(
          ic.seed);
      ScalarField f(grid);
      for (Eigen::Index k = 0; k < grid.cells(); ++k) {
        const double u = double(rng() >> 11) * 0x1.0p-53;
        f[k] = ic.mean + ic.amp * (2.0 * u - 1.0);
      }
      return f;
    }
    case InitialCondition::Kind::File: {
      const std::filesystem::path p = base_dir.empty() ? std::filesystem::path(ic.path) : base_dir / ic.path;
      if (!std::filesystem::exists(p)) throw ValidationError("initial data file not found: " + p.string());
      Snapshot s = read_snapshot(p);
      if (s.field.grid().nx() != grid.nx() || s.field.grid().ny() != grid.ny()) {
        throw ValidationError("initial data file " + p.string() + " does not match the configured grid");
      }
      return ScalarField(grid, s.field.values());
    }
  }
  return ScalarField(grid);
}

void validate_config(const RunConfig& c, const std::filesystem::path& base_dir) {
  std::vector<Violation> v;
  auto bad = [&](const char* tag, const std::string& what) {
    v.push_back({tag, std::string(tag) + " violated: " + what});
  };
  std::optional<GridSpec> grid;
  try {
    grid = c.grid();
  } catch (const InvalidGrid& e) {
    bad("grid", e.what());
  }
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) bad("time-step", "dt > 0");
  if (!(c.T >= 0.0) || !std::isfinite(c.T)) bad("final-time", "T >= 0");
  if (c.snapshot_every < 0) bad("snapshot-cadence", "snapshot_every >= 0");
  for (std::size_t i = 0; i < c.eps_list.size(); ++i) {
    if (!(c.eps_list[i] > 0.0) || (i > 0 && !(c.eps_list[i] < c.eps_list[i - 1]))) {
      bad("eps-sweep", "eps_list positive and strictly decreasing");
      break;
    }
  }
  if (grid) {
    try {
      const auto phi0 = make_initial_field(c.phi0, *grid, base_dir);
      const auto p0 = make_initial_field(c.p0, *grid, base_dir);
      auto pv = validate(c.params, phi0, p0);
      v.insert(v.end(), pv.begin(), pv.end());
    } catch (const ValidationError& e) {
      bad("initial-data", e.what());
      auto pv = validate(c.params);
      v.insert(v.end(), pv.begin(), pv.end());
    }
  } else {
    auto pv = validate(c.params);
    v.insert(v.end(), pv.begin(), pv.end());
  }
  if (!v.empty()) throw ValidationError(describe(v));
}

const char* const kDiagnosticsHeader =
    "step,t,energy,energy_balance_residual,phi_min,phi_max,p_min,p_max,n_min,n_max,l2_u,div_residual,"
    "mass_phi,mass_ledger_residual,picard_iters,newton_iters";

void write_diagnostics_header(std::ostream& os) { os << kDiagnosticsHeader << '\n'; }

void write_diagnostics_row(std::ostream& os, const DiagnosticsRecord& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d\n", r.step,
                r.t, r.energy, r.energy_balance_residual, r.phi_min, r.phi_max, r.p_min, r.p_max, r.n_min,
                r.n_max, r.l2_u, r.div_residual, r.mass_phi, r.mass_ledger_residual, r.picard_iters,
                r.newton_iters);
  os << buf;
}

namespace {

void write_fields(const std::filesystem::path& dir, const SimState& s, int step) {
  const std::string suffix = "_" + std::to_string(step) + ".dat";
  write_snapshot(dir / ("phi" + suffix), s.phi, s.t);
  write_snapshot(dir / ("mu" + suffix), s.mu, s.t);
  write_snapshot(dir / ("pi" + suffix), s.pi, s.t);
  write_snapshot(dir / ("p" + suffix), s.p, s.t);
  write_snapshot(dir / ("n" + suffix), s.n, s.t);
}

}  // namespace

RunResult execute_run(const RunConfig& c, const std::filesystem::path& base_dir) {
  validate_config(c, base_dir);
  const GridSpec grid = c.grid();
  const Simulation sim(grid, c.params, c.mode);
  SimState init = sim.initial_state(make_initial_field(c.phi0, grid, base_dir),
                                    make_initial_field(c.p0, grid, base_dir));

  const std::filesystem::path dir =
      base_dir.empty() || std::filesystem::path(c.output_dir).is_absolute() ? std::filesystem::path(c.output_dir)
                                                                           : base_dir / c.output_dir;
  std::filesystem::create_directories(dir);
  std::ofstream csv(dir / "diagnostics.csv");
  if (!csv) throw Error("cannot write " + (dir / "diagnostics.csv").string());
  write_diagnostics_header(csv);
  if (c.snapshot_every > 0) write_fields(dir, init, 0);

  int step = 0;
  auto observer = [&](const SimState& s, const DiagnosticsRecord& r, bool snap) {
    ++step;
    write_diagnostics_row(csv, r);
    if (snap) write_fields(dir, s, step);
  };
  return run(sim, std::move(init), RunSchedule{c.T, c.dt, c.snapshot_every}, observer);
}

}  // namespace tumorsim
