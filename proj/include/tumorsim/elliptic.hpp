#pragma once

// Matrix-free preconditioned conjugate gradient for
//
//     -laplacian(x) + coeff0 * x = rhs
//
// with homogeneous boundary data. Singular no-flux problems are solved in the
// zero-mean subspace by projecting the right-hand side, the preconditioned
// residual and the iterate.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

#include "tumorsim/errors.hpp"
#include "tumorsim/grid.hpp"
#include "tumorsim/operators.hpp"

namespace tumorsim {

enum class Gauge { None, ZeroMean };

template <typename Scalar>
struct BasicEllipticProblem {
  BasicScalarField<Scalar> coeff0;
  BasicScalarField<Scalar> rhs;
  Bc bc = Bc::DirichletZero;
  Gauge gauge = Gauge::None;
};

struct SolveReport {
  int iterations = 0;
  double residual_norm = 0.0;
  bool converged = false;
};

template <typename Scalar>
struct BasicEllipticSolution {
  BasicScalarField<Scalar> field;
  SolveReport report;
};

template <typename Scalar>
struct BasicSolveOptions {
  using Values = typename BasicScalarField<Scalar>::Values;
  std::optional<BasicScalarField<Scalar>> initial_guess;
  /// Called with (iteration, iterate) after every CG update.
  std::function<void(int, const Values&)> on_iterate;
};

using EllipticProblem = BasicEllipticProblem<double>;
using EllipticSolution = BasicEllipticSolution<double>;
using SolveOptions = BasicSolveOptions<double>;

/// Applies -laplacian(x) + coeff0 * x for homogeneous boundary data.
template <typename Scalar>
BasicScalarField<Scalar> apply_elliptic(const BasicEllipticProblem<Scalar>& p,
                                        const BasicScalarField<Scalar>& x) {
  BasicScalarField<Scalar> out = laplacian(x, p.bc);
  out.values() = p.coeff0.values() * x.values() - out.values();
  return out;
}

namespace detail {

template <typename Scalar>
void check_problem(const BasicEllipticProblem<Scalar>& p) {
  if (p.bc == Bc::DirichletOne) {
    throw Error("elliptic solve expects homogeneous boundary data; shift the unknown first");
  }
  if (!(p.coeff0.grid() == p.rhs.grid())) throw Error("elliptic problem fields live on different grids");
  if (!(p.coeff0.min() >= Scalar(0))) throw Error("elliptic zeroth-order coefficient must be >= 0");
  const bool singular = !is_dirichlet(p.bc) && p.coeff0.max() == Scalar(0);
  if (singular && p.gauge != Gauge::ZeroMean) {
    throw Error("pure no-flux Poisson problem needs the zero-mean gauge");
  }
  if (!singular && p.gauge == Gauge::ZeroMean) {
    throw Error("zero-mean gauge only applies to pure no-flux Poisson problems");
  }
}

template <typename Values>
void remove_mean(Values& v) {
  v -= v.mean();
}

}  // namespace detail

/// Stops when ||rhs - A x||_2 <= tol * max(1, ||rhs||_2). A non-converged
/// solve returns the last iterate with report.converged = false.
template <typename Scalar>
BasicEllipticSolution<Scalar> solve(const BasicEllipticProblem<Scalar>& p, double tol, int max_iter,
                                    const BasicSolveOptions<Scalar>& opts = {}) {
  using Values = typename BasicScalarField<Scalar>::Values;
  detail::check_problem(p);
  const GridSpec& g = p.rhs.grid();
  const bool gauge = p.gauge == Gauge::ZeroMean;

  Values b = p.rhs.values();
  if (gauge) {
    const Scalar scale = std::max(Scalar(1), b.abs().maxCoeff());
    if (std::abs(b.mean()) > Scalar(tol) * scale) {
      std::ostringstream os;
      os << "no-flux problem with incompatible data: mean rhs = " << b.mean();
      throw IncompatibleRHS(os.str());
    }
    detail::remove_mean(b);
  }
  const Scalar target = Scalar(tol) * std::max(Scalar(1), Scalar(b.matrix().norm()));

  BasicScalarField<Scalar> x = opts.initial_guess ? *opts.initial_guess : BasicScalarField<Scalar>(g);
  if (gauge) detail::remove_mean(x.values());
  const Values inv_diag = Scalar(1) / (p.coeff0.values() - laplacian_diagonal<Scalar>(g, p.bc));

  auto residual = [&]() {
    Values r = b - apply_elliptic(p, x).values();
    if (gauge) detail::remove_mean(r);
    return r;
  };
  auto precondition = [&](const Values& r) {
    Values z = inv_diag * r;
    if (gauge) detail::remove_mean(z);
    return z;
  };

  Values r = residual();
  Scalar rnorm = r.matrix().norm();
  SolveReport rep;
  if (rnorm <= target) {
    rep.residual_norm = double(rnorm);
    rep.converged = true;
    return {std::move(x), rep};
  }

  Values z = precondition(r);
  BasicScalarField<Scalar> dir(g, z);
  Scalar rz = (r * z).sum();
  int k = 0;
  while (k < max_iter) {
    ++k;
    const Values ap = apply_elliptic(p, dir).values();
    const Scalar pap = (dir.values() * ap).sum();
    if (!(pap > Scalar(0))) break;
    const Scalar alpha = rz / pap;
    x.values() += alpha * dir.values();
    r -= alpha * ap;
    if (gauge) detail::remove_mean(r);
    if (opts.on_iterate) opts.on_iterate(k, x.values());

    rnorm = r.matrix().norm();
    if (rnorm <= target) {
      // Confirm against the true residual; restart from it if the
      // recurrence drifted.
      r = residual();
      rnorm = r.matrix().norm();
      if (rnorm <= target) {
        rep.converged = true;
        break;
      }
      z = precondition(r);
      dir.values() = z;
      rz = (r * z).sum();
      continue;
    }
    z = precondition(r);
    const Scalar rz_new = (r * z).sum();
    dir.values() = z + (rz_new / rz) * dir.values();
    rz = rz_new;
  }
  if (gauge) detail::remove_mean(x.values());
  if (!rep.converged) {
    rnorm = residual().matrix().norm();
    rep.converged = rnorm <= target;
  }
  rep.iterations = k;
  rep.residual_norm = double(rnorm);
  return {std::move(x), rep};
}

/// Default iteration cap, 10 * nx * ny.
inline int default_max_iter(const GridSpec& g) { return int(10 * g.cells()); }

/// Like solve() but raises NoConvergence when the tolerance is not met.
template <typename Scalar>
BasicEllipticSolution<Scalar> solve_or_throw(const BasicEllipticProblem<Scalar>& p, double tol, int max_iter,
                                             const BasicSolveOptions<Scalar>& opts = {}) {
  auto sol = solve(p, tol, max_iter, opts);
  if (!sol.report.converged) {
    std::ostringstream os;
    os << "conjugate gradient stalled after " << sol.report.iterations
       << " iterations, residual " << sol.report.residual_norm;
    throw NoConvergence(os.str());
  }
  return sol;
}

}  // namespace tumorsim
