#pragma once

#include <optional>

#include "tumorsim/elliptic.hpp"
#include "tumorsim/grid.hpp"
#include "tumorsim/physics.hpp"

namespace tumorsim {

/// How the lagged transport term enters the phase equation.
///   Conservative: div(u phi_old) - phi_old * S_T
///   Advective:    div(u phi_old) - phi_old * div(u), i.e. u . grad(phi_old)
/// The two agree whenever div(u) = S_T holds.
enum class AdvectionForm { Conservative, Advective };

struct CHStepInput {
  ScalarField phi_old;
  ScalarField mu_old;
  FaceVectorField u;
  ScalarField st_field;
  double dt;
  ModelParams params;
  BoundarySpec bc{};
  AdvectionForm form = AdvectionForm::Conservative;
  /// Newton starting point; defaults to (phi_old, mu_old).
  std::optional<ScalarField> phi_guess{};
  std::optional<ScalarField> mu_guess{};
};

struct CHStepResult {
  ScalarField phi;
  ScalarField mu;
  /// Newton iterations and final scaled residual.
  SolveReport report;
};

/// One convex-splitting step of the viscous Cahn-Hilliard equation
///
///   (phi - phi_old)/dt - delta lap(mu - mu_old)/dt + T(phi_old) - lap(mu) = 0
///   mu = -eps^2 lap(phi) + C'(phi) + B'(phi_old)
///
/// where T is the lagged transport/source term (see AdvectionForm), mu has
/// the mu boundary condition and phi the phi condition. Solved by Newton with
/// step halving that keeps every iterate inside [clamp, 1 - clamp].
/// The first equation's residual is measured after multiplying by dt.
CHStepResult ch_step(const CHStepInput& in);

/// The lagged term T(phi_old) of the phase equation.
ScalarField ch_transport_term(const ScalarField& phi_old, const FaceVectorField& u,
                              const ScalarField& st_field, Bc phi_bc, AdvectionForm form);

/// Residuals (dt * R1, R2) of the discrete step equations at (phi, mu).
std::pair<ScalarField, ScalarField> ch_residual(const CHStepInput& in, const ScalarField& phi,
                                                const ScalarField& mu);

/// Discrete free energy  sum_faces eps^2/2 |grad phi|^2 + sum_cells F(phi).
double free_energy(const ScalarField& phi, const ModelParams& params, Bc phi_bc);

}  // namespace tumorsim
