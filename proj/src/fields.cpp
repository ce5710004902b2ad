#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "tumorsim/grid.hpp"
#include "tumorsim/snapshot.hpp"

namespace tumorsim {

std::string to_string(Bc bc) {
  switch (bc) {
    case Bc::DirichletZero: return "DirichletZero";
    case Bc::DirichletOne: return "DirichletOne";
    case Bc::NeumannZero: return "NeumannZero";
    case Bc::NoFlux: return "NoFlux";
  }
  return "?";
}

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_snapshot(std::ostream& os, const ScalarField& f, double time) {
  const GridSpec& g = f.grid();
  os << g.nx() << ' ' << g.ny() << ' ' << format_double(g.hx()) << ' ' << format_double(g.hy())
     << ' ' << format_double(time) << '\n';
  for (Eigen::Index k = 0; k < g.cells(); ++k) os << format_double(f[k]) << '\n';
}

void write_snapshot(const std::filesystem::path& path, const ScalarField& f, double time) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open snapshot file for writing: " + path.string());
  write_snapshot(os, f, time);
  if (!os) throw Error("failed writing snapshot: " + path.string());
}

Snapshot read_snapshot(std::istream& is) {
  int nx = 0;
  int ny = 0;
  double hx = 0.0;
  double hy = 0.0;
  double time = 0.0;
  if (!(is >> nx >> ny >> hx >> hy >> time)) throw Error("malformed snapshot header");
  GridSpec grid(nx, ny, nx * hx, ny * hy);
  ScalarField f(grid);
  for (Eigen::Index k = 0; k < grid.cells(); ++k) {
    if (!(is >> f[k])) throw Error("snapshot truncated at value " + std::to_string(k));
  }
  return {std::move(f), time};
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open snapshot file: " + path.string());
  return read_snapshot(is);
}

}  // namespace tumorsim
