#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "support/oracles.hpp"
#include "tumorsim/elliptic.hpp"
#include "tumorsim/mms.hpp"

using namespace tumorsim;

namespace {

ScalarField random_field(const GridSpec& g, unsigned seed, double lo, double hi) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  ScalarField f(g);
  for (Eigen::Index k = 0; k < g.cells(); ++k) f[k] = d(rng);
  return f;
}

Eigen::MatrixXd dense_operator(const EllipticProblem& p) {
  const GridSpec& g = p.rhs.grid();
  Eigen::MatrixXd a = -oracle::laplacian(g, p.bc).m;
  a.diagonal() += oracle::vec(p.coeff0);
  return a;
}

}  // namespace

TEST(Elliptic, ZeroRhsGivesZero) {
  GridSpec g(8, 8, 1.0, 1.0);
  EllipticProblem p{ScalarField(g), ScalarField(g), Bc::DirichletZero, Gauge::None};
  auto s = solve(p, 1e-10, 100);
  EXPECT_TRUE(s.report.converged);
  EXPECT_EQ(s.field.values().abs().maxCoeff(), 0.0);
}

TEST(Elliptic, HelmholtzMatchesDenseOracle) {
  GridSpec g(5, 5, 1.0, 1.0);
  EllipticProblem p{random_field(g, 1, 0.0, 3.0), random_field(g, 2, -1.0, 1.0), Bc::DirichletZero, Gauge::None};
  const Eigen::VectorXd ref = dense_operator(p).fullPivLu().solve(oracle::vec(p.rhs));
  auto s = solve(p, 1e-14, 1000);
  ASSERT_TRUE(s.report.converged);
  EXPECT_LT((s.field.values().matrix() - ref).lpNorm<Eigen::Infinity>(), 1e-10);
}

TEST(Elliptic, NoFluxHelmholtzMatchesDenseOracle) {
  GridSpec g(6, 5, 2.0, 1.0);
  EllipticProblem p{random_field(g, 3, 0.5, 2.0), random_field(g, 4, -1.0, 1.0), Bc::NoFlux, Gauge::None};
  const Eigen::VectorXd ref = dense_operator(p).fullPivLu().solve(oracle::vec(p.rhs));
  auto s = solve(p, 1e-14, 1000);
  EXPECT_LT((s.field.values().matrix() - ref).lpNorm<Eigen::Infinity>(), 1e-10);
}

TEST(Elliptic, ReportedResidualMeetsTolerance) {
  GridSpec g(16, 16, 1.0, 1.0);
  EllipticProblem p{random_field(g, 5, 0.0, 1.0), random_field(g, 6, -1.0, 1.0), Bc::DirichletZero, Gauge::None};
  const double tol = 1e-10;
  auto s = solve(p, tol, default_max_iter(g));
  ASSERT_TRUE(s.report.converged);
  const double true_res = (p.rhs.values() - apply_elliptic(p, s.field).values()).matrix().norm();
  EXPECT_LE(true_res, tol * std::max(1.0, p.rhs.values().matrix().norm()));
  EXPECT_NEAR(true_res, s.report.residual_norm, 1e-12);
}

TEST(Elliptic, ZeroMeanGauge) {
  GridSpec g(8, 8, 1.0, 1.0);
  ScalarField rhs = random_field(g, 7, -1.0, 1.0);
  rhs.values() -= rhs.values().mean();
  EllipticProblem p{ScalarField(g), rhs, Bc::NoFlux, Gauge::ZeroMean};
  auto s = solve(p, 1e-12, 1000);
  ASSERT_TRUE(s.report.converged);
  EXPECT_LT(std::abs(s.field.values().mean()), 1e-14);
  EXPECT_LT((apply_elliptic(p, s.field).values() - rhs.values()).abs().maxCoeff(), 1e-9);
}

TEST(Elliptic, IncompatibleNeumannData) {
  GridSpec g(8, 8, 1.0, 1.0);
  EllipticProblem p{ScalarField(g), ScalarField(g, 1.0), Bc::NoFlux, Gauge::ZeroMean};
  EXPECT_THROW(solve(p, 1e-10, 100), IncompatibleRHS);
}

TEST(Elliptic, GaugeRules) {
  GridSpec g(8, 8, 1.0, 1.0);
  EllipticProblem singular{ScalarField(g), ScalarField(g), Bc::NoFlux, Gauge::None};
  EXPECT_THROW(solve(singular, 1e-10, 100), Error);
  EllipticProblem regular{ScalarField(g), ScalarField(g), Bc::DirichletZero, Gauge::ZeroMean};
  EXPECT_THROW(solve(regular, 1e-10, 100), Error);
  EllipticProblem negative{ScalarField(g, -1.0), ScalarField(g), Bc::DirichletZero, Gauge::None};
  EXPECT_THROW(solve(negative, 1e-10, 100), Error);
}

TEST(Elliptic, NonConvergenceIsReported) {
  GridSpec g(32, 32, 1.0, 1.0);
  EllipticProblem p{ScalarField(g), random_field(g, 8, -1.0, 1.0), Bc::DirichletZero, Gauge::None};
  auto s = solve(p, 1e-14, 3);
  EXPECT_FALSE(s.report.converged);
  EXPECT_EQ(s.report.iterations, 3);
  EXPECT_THROW(solve_or_throw(p, 1e-14, 3), NoConvergence);
}

TEST(Elliptic, EnergyNormErrorDecreasesMonotonically) {
  GridSpec g(12, 12, 1.0, 1.0);
  EllipticProblem p{random_field(g, 9, 0.0, 5.0), random_field(g, 10, -1.0, 1.0), Bc::DirichletZero, Gauge::None};
  const Eigen::MatrixXd a = dense_operator(p);
  const Eigen::VectorXd x_star = a.ldlt().solve(oracle::vec(p.rhs));
  std::vector<double> errs;
  SolveOptions opts;
  opts.on_iterate = [&](int, const ScalarField::Values& x) {
    const Eigen::VectorXd e = x.matrix() - x_star;
    errs.push_back(std::sqrt(e.dot(a * e)));
  };
  auto s = solve(p, 1e-12, 1000, opts);
  ASSERT_TRUE(s.report.converged);
  ASSERT_GT(errs.size(), 3u);
  for (std::size_t k = 1; k < errs.size(); ++k) EXPECT_LE(errs[k], errs[k - 1] * (1 + 1e-12) + 1e-14);
}

TEST(Elliptic, DiscreteMaximumPrinciple) {
  GridSpec g(16, 16, 1.0, 1.0);
  // Shifted unknown m = n - 1: -lap m + c m = kappa n_c - c with c = P + kappa.
  const ScalarField kappa = random_field(g, 11, 0.0, 4.0);
  const ScalarField pfield = random_field(g, 12, 0.0, 1.0);
  const double n_c = 0.3;
  EllipticProblem p{ScalarField(g), ScalarField(g), Bc::DirichletZero, Gauge::None};
  p.coeff0.values() = pfield.values() + kappa.values();
  p.rhs.values() = kappa.values() * n_c - p.coeff0.values();
  auto s = solve(p, 1e-12, 2000);
  const auto n = s.field.values() + 1.0;
  EXPECT_GE(n.minCoeff(), -1e-10);
  EXPECT_LE(n.maxCoeff(), 1.0 + 1e-10);
}

TEST(Elliptic, FloatScalarSolve) {
  GridSpec g(8, 8, 1.0, 1.0);
  BasicEllipticProblem<float> p{BasicScalarField<float>(g, 1.0f), BasicScalarField<float>(g, 1.0f),
                                Bc::DirichletZero, Gauge::None};
  auto s = solve(p, 1e-5, 200);
  EXPECT_TRUE(s.report.converged);
  EXPECT_GT(s.field.min(), 0.0f);
}

TEST(Elliptic, ManufacturedSolutionsConvergeAtSecondOrder) {
  const auto cases = run_mms_suite({16, 32, 64});
  ASSERT_EQ(cases.size(), 4u);
  for (const auto& c : cases) {
    for (double o : c.orders) {
      EXPECT_GE(o, 1.8) << c.name;
      EXPECT_LE(o, 2.2) << c.name;
    }
  }
}

TEST(Elliptic, PoissonL2ErrorRatioNearFour) {
  auto err = [](int n) {
    GridSpec g(n, n, 1.0, 1.0);
    const double pi = std::numbers::pi;
    const auto u = ScalarField::sample(g, [&](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); });
    EllipticProblem p{ScalarField(g), ScalarField(g, 2 * pi * pi * u.values()), Bc::DirichletZero, Gauge::None};
    auto s = solve_or_throw(p, 1e-12, default_max_iter(g));
    return std::sqrt((s.field.values() - u.values()).square().sum() * g.cell_volume());
  };
  const double ratio = err(16) / err(32);
  EXPECT_NEAR(ratio, 4.0, 0.3);
}
