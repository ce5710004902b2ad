#pragma once

#include <optional>

#include "tumorsim/elliptic.hpp"
#include "tumorsim/grid.hpp"

namespace tumorsim {

struct FlowResult {
  ScalarField pi;
  FaceVectorField u;
  /// max |div u - S_T|
  double div_residual = 0.0;
  SolveReport report;
};

/// Korteweg flux: face-averaged mu times the face gradient of phi.
FaceVectorField korteweg_flux(const ScalarField& mu, const ScalarField& phi, const BoundarySpec& bc);

/// Darcy closure u = -grad(Pi) + mu grad(phi) with div u = S_T.
/// The pressure condition comes from bc.pi: Dirichlet-zero, or no-flux with a
/// zero-mean gauge (the latter requires a compatible, mean-free S_T).
FlowResult solve_darcy(const ScalarField& mu, const ScalarField& phi, const ScalarField& st_field,
                       const BoundarySpec& bc, double tol,
                       const std::optional<ScalarField>& pi_guess = std::nullopt);

}  // namespace tumorsim
