#include "tumorsim/transport.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "tumorsim/operators.hpp"

namespace tumorsim {

double transport_admissible_dt(const FaceVectorField& u, const ModelParams& params) {
  const GridSpec& g = u.grid();
  const double h = std::min(g.hx(), g.hy());
  double dt = params.cfl * h / std::max(u.max_abs(), 1e-14);
  if (params.delta > 0.0) dt = std::min(dt, params.cfl * h * h / (4.0 * params.delta));
  return dt;
}

double transport_reaction_factor(double n, double p, double phi, const ModelParams& m) {
  return -source_st(n, p, phi, m) +
         phi * (n - m.lambda1 - m.lambda2 * heaviside_smooth(m.n_N - n, m.sigmaH));
}

ScalarField transport_step(const ScalarField& p_old, const FaceVectorField& u, const ScalarField& phi,
                           const ScalarField& n, double dt, const ModelParams& params,
                           const BoundarySpec& bc) {
  const double admissible = transport_admissible_dt(u, params);
  if (dt > admissible) {
    std::ostringstream os;
    os << "transport step dt = " << dt << " violates the CFL bound; admissible dt = " << admissible;
    throw CflViolation(os.str(), admissible);
  }
  const GridSpec& g = p_old.grid();
  const int nx = g.nx();
  const int ny = g.ny();
  const double ihx = 1.0 / g.hx();
  const double ihy = 1.0 / g.hy();

  ScalarField out(g);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double pc = p_old(i, j);
      // Inflow through a face: outward velocity < 0. Boundary inflow brings P = 0.
      double adv = 0.0;
      const double ul = u.xf(i, j);
      if (ul > 0.0) adv += ul * ihx * ((i > 0 ? p_old(i - 1, j) : 0.0) - pc);
      const double ur = u.xf(i + 1, j);
      if (ur < 0.0) adv -= ur * ihx * ((i + 1 < nx ? p_old(i + 1, j) : 0.0) - pc);
      const double ub = u.yf(i, j);
      if (ub > 0.0) adv += ub * ihy * ((j > 0 ? p_old(i, j - 1) : 0.0) - pc);
      const double ut = u.yf(i, j + 1);
      if (ut < 0.0) adv -= ut * ihy * ((j + 1 < ny ? p_old(i, j + 1) : 0.0) - pc);

      const double react = pc * transport_reaction_factor(n(i, j), pc, phi(i, j), params);
      out(i, j) = pc + dt * (adv + react);
    }
  }
  if (params.delta > 0.0) {
    out.values() += dt * params.delta * laplacian(p_old, bc.p).values();
  }
  return out;
}

}  // namespace tumorsim
