#pragma once

#include "tumorsim/elliptic.hpp"
#include "tumorsim/physics.hpp"

namespace tumorsim {

struct NutrientResult {
  ScalarField n;
  SolveReport report;
};

/// Quasi-static nutrient: -lap(n) + (P + kappa(phi)) n = kappa(phi) n_c with
/// n = 1 on the boundary (bc.n), solved for the shifted unknown n - 1.
NutrientResult solve_nutrient(const ScalarField& p, const ScalarField& phi, const ModelParams& params,
                              double tol, const BoundarySpec& bc = {});

}  // namespace tumorsim
