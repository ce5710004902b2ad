#pragma once

#include "tumorsim/grid.hpp"
#include "tumorsim/physics.hpp"

namespace tumorsim {

/// Largest dt accepted by transport_step for this velocity:
/// cfl * min(h) / max|u|, and cfl * min(h)^2 / (4 delta) when delta > 0.
double transport_admissible_dt(const FaceVectorField& u, const ModelParams& params);

/// Reaction factor -S_T + phi (n - lambda1 - lambda2 H(n_N - n)) of the
/// viable-cell equation in nonconservative form; the rate is P times it.
double transport_reaction_factor(double n, double p, double phi, const ModelParams& params);

/// Explicit first-order upwind step of the viable-cell fraction P.
///
/// Uses the flux form with the identity div u = S_T absorbed:
///   P_new = P - dt [div(u P_up) - P div(u)] + dt P R + dt delta lap(P)
/// which reduces to a sum over the cell's inflow faces only. Inflow boundary
/// faces carry P = 0; outflow faces carry the interior value. The diffusive
/// part (delta > 0) uses the bc.p condition. Throws CflViolation when dt
/// exceeds transport_admissible_dt.
ScalarField transport_step(const ScalarField& p_old, const FaceVectorField& u, const ScalarField& phi,
                           const ScalarField& n, double dt, const ModelParams& params,
                           const BoundarySpec& bc = {});

}  // namespace tumorsim
