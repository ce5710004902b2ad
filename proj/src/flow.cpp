#include "tumorsim/flow.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tumorsim/operators.hpp"

namespace tumorsim {

FaceVectorField korteweg_flux(const ScalarField& mu, const ScalarField& phi, const BoundarySpec& bc) {
  return face_product(face_average(mu, bc.mu), gradient_to_faces(phi, bc.phi));
}

FlowResult solve_darcy(const ScalarField& mu, const ScalarField& phi, const ScalarField& st_field,
                       const BoundarySpec& bc, double tol, const std::optional<ScalarField>& pi_guess) {
  const GridSpec& g = phi.grid();
  const FaceVectorField k = korteweg_flux(mu, phi, bc);

  EllipticProblem prob{ScalarField(g), ScalarField(g), bc.pi, Gauge::None};
  prob.rhs.values() = st_field.values() - divergence_from_faces(k).values();
  if (!is_dirichlet(bc.pi)) {
    prob.gauge = Gauge::ZeroMean;
    const double net = integrate(st_field);
    if (std::abs(net) > tol * std::max(1.0, g.lx() * g.ly())) {
      throw IncompatibleRHS("no-flux pressure needs a source with zero integral, got " + std::to_string(net));
    }
  }

  // Absolute target: the constraint residual div u - S_T is exactly the
  // solver residual, so scale the relative tolerance back to tol.
  const double rhs_norm = prob.rhs.values().matrix().norm();
  const double rel = tol / std::max(1.0, rhs_norm);
  SolveOptions opts;
  opts.initial_guess = pi_guess;
  auto sol = solve_or_throw(prob, rel, default_max_iter(g), opts);

  FlowResult out{std::move(sol.field), FaceVectorField(g), 0.0, sol.report};
  out.u = gradient_to_faces(out.pi, bc.pi);
  out.u.x() = k.x() - out.u.x();
  out.u.y() = k.y() - out.u.y();
  out.div_residual = (divergence_from_faces(out.u).values() - st_field.values()).abs().maxCoeff();
  return out;
}

}  // namespace tumorsim
