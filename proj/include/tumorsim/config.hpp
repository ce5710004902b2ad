#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tumorsim/grid.hpp"
#include "tumorsim/physics.hpp"
#include "tumorsim/simulate.hpp"

namespace tumorsim {

/// Initial data for one field: a constant, seeded spinodal noise
/// mean + amp * (2 U - 1) with U uniform on [0, 1), or a snapshot file.
struct InitialCondition {
  enum class Kind { Uniform, Spinodal, File };
  Kind kind = Kind::Uniform;
  double value = 0.0;
  double mean = 0.0;
  double amp = 0.0;
  std::uint64_t seed = 0;
  std::string path;

  static InitialCondition uniform(double v);
  static InitialCondition spinodal(double mean, double amp, std::uint64_t seed);
  static InitialCondition file(std::string path);

  friend bool operator==(const InitialCondition&, const InitialCondition&) = default;
};

struct RunConfig {
  int nx = 64;
  int ny = 64;
  double lx = 64.0;
  double ly = 64.0;
  double T = 0.1;
  double dt = 5e-4;
  int snapshot_every = 0;
  ModelParams params;
  InitialCondition phi0 = InitialCondition::spinodal(0.5, 0.05, 1);
  InitialCondition p0 = InitialCondition::uniform(0.25);
  RunMode mode = RunMode::Full;
  std::string output_dir = "out";
  /// Interface coefficients of the `limit` sweep, strictly decreasing.
  std::vector<double> eps_list{0.2, 0.1, 0.05};

  GridSpec grid() const { return GridSpec(nx, ny, lx, ly); }
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses the "[section]" / "key = value" format. '#' starts a comment.
/// Syntax problems and unknown keys raise ParseError; parameter ranges are
/// checked by validate_config, not here.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Writes every key, so that parse_config(serialize(c)) == c.
std::string serialize(const RunConfig& c);

/// Range checks on grid, time and parameters plus the initial data; raises
/// ValidationError listing every violated condition. File-based initial data
/// is resolved relative to base_dir.
void validate_config(const RunConfig& c, const std::filesystem::path& base_dir = {});

/// 64-bit LCG x <- a x + c (mod 2^64), a = 6364136223846793005,
/// c = 1442695040888963407, seeded with x0 = seed. Each draw maps the state
/// to [0, 1) as (x >> 11) * 2^-53. Cells are filled in storage order.
ScalarField make_initial_field(const InitialCondition& ic, const GridSpec& grid,
                               const std::filesystem::path& base_dir = {});

/// Diagnostics CSV; one row per step, values printed with %.17g.
extern const char* const kDiagnosticsHeader;
void write_diagnostics_header(std::ostream& os);
void write_diagnostics_row(std::ostream& os, const DiagnosticsRecord& r);

/// Runs the configured simulation, writing diagnostics.csv and snapshots
/// <field>_<step>.dat (phi, mu, pi, p, n; step 0 is the initial state) into
/// output_dir.
RunResult execute_run(const RunConfig& c, const std::filesystem::path& base_dir = {});

}  // namespace tumorsim
