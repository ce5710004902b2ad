#include "tumorsim/nutrient.hpp"

namespace tumorsim {

NutrientResult solve_nutrient(const ScalarField& p, const ScalarField& phi, const ModelParams& params,
                              double tol, const BoundarySpec& bc) {
  if (!is_dirichlet(bc.n)) throw Error("nutrient solve expects Dirichlet boundary data");
  const GridSpec& g = p.grid();
  const double wall = dirichlet_value(bc.n);

  EllipticProblem prob{ScalarField(g), ScalarField(g), Bc::DirichletZero, Gauge::None};
  for (Eigen::Index k = 0; k < g.cells(); ++k) {
    const double kappa = transfer_coefficient(phi[k], params);
    prob.coeff0[k] = p[k] + kappa;
    prob.rhs[k] = kappa * params.n_c - prob.coeff0[k] * wall;
  }
  auto sol = solve_or_throw(prob, tol, default_max_iter(g));
  sol.field.values() += wall;
  return {std::move(sol.field), sol.report};
}

}  // namespace tumorsim
