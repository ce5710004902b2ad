#include "tumorsim/mms.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "tumorsim/elliptic.hpp"
#include "tumorsim/operators.hpp"

namespace tumorsim {

namespace {

constexpr double pi = std::numbers::pi;

double max_error(const ScalarField& a, const ScalarField& b) {
  return (a.values() - b.values()).abs().maxCoeff();
}

double laplacian_error(int n) {
  const GridSpec g(n, n, 1.0, 1.0);
  const auto u = ScalarField::sample(g, [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); });
  ScalarField exact(g, -2.0 * pi * pi * u.values());
  return max_error(laplacian(u, Bc::DirichletZero), exact);
}

double elliptic_error(int n, Bc bc, bool helmholtz) {
  const GridSpec g(n, n, 1.0, 1.0);
  ScalarField u(g), f(g), c(g);
  if (bc == Bc::NoFlux) {
    u = ScalarField::sample(g, [](double x, double y) { return std::cos(pi * x) * std::cos(pi * y); });
    f.values() = 2.0 * pi * pi * u.values();
  } else if (!helmholtz) {
    u = ScalarField::sample(g, [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); });
    f.values() = 2.0 * pi * pi * u.values();
  } else {
    u = ScalarField::sample(g, [](double x, double y) { return std::sin(pi * x) * std::sin(2.0 * pi * y); });
    c = ScalarField::sample(g, [](double x, double y) { return 1.0 + x * y; });
    f.values() = (5.0 * pi * pi + c.values()) * u.values();
  }
  EllipticProblem p{c, f, bc, bc == Bc::NoFlux ? Gauge::ZeroMean : Gauge::None};
  if (bc == Bc::NoFlux) {
    // The sampled source has a tiny nonzero mean at finite h.
    p.rhs.values() -= p.rhs.values().mean();
  }
  auto sol = solve_or_throw(p, 1e-12, default_max_iter(g));
  if (bc == Bc::NoFlux) u.values() -= u.values().mean();
  return max_error(sol.field, u);
}

MmsCase run_case(const std::string& name, const std::vector<int>& cells, double (*err)(int)) {
  MmsCase c{name, cells, {}, {}};
  for (int n : cells) c.errors.push_back(err(n));
  for (std::size_t k = 1; k < c.errors.size(); ++k) {
    c.orders.push_back(std::log(c.errors[k - 1] / c.errors[k]) / std::log(double(cells[k]) / cells[k - 1]));
  }
  return c;
}

}  // namespace

std::vector<MmsCase> run_mms_suite(const std::vector<int>& cells) {
  return {
      run_case("laplacian", cells, laplacian_error),
      run_case("poisson", cells, [](int n) { return elliptic_error(n, Bc::DirichletZero, false); }),
      run_case("poisson-noflux", cells, [](int n) { return elliptic_error(n, Bc::NoFlux, false); }),
      run_case("helmholtz", cells, [](int n) { return elliptic_error(n, Bc::DirichletZero, true); }),
  };
}

void print_mms_table(std::ostream& os, const std::vector<MmsCase>& cases) {
  char buf[128];
  for (const auto& c : cases) {
    for (std::size_t k = 0; k < c.cells.size(); ++k) {
      if (k == 0) {
        std::snprintf(buf, sizeof buf, "%-15s h=1/%-4d error=%.3e\n", c.name.c_str(), c.cells[k], c.errors[k]);
      } else {
        std::snprintf(buf, sizeof buf, "%-15s h=1/%-4d error=%.3e order=%.3f\n", c.name.c_str(), c.cells[k],
                      c.errors[k], c.orders[k - 1]);
      }
      os << buf;
    }
  }
}

}  // namespace tumorsim
