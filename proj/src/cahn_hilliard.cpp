#include "tumorsim/cahn_hilliard.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <cmath>
#include <sstream>
#include <vector>

#include "tumorsim/operators.hpp"

namespace tumorsim {

ScalarField ch_transport_term(const ScalarField& phi_old, const FaceVectorField& u,
                              const ScalarField& st_field, Bc phi_bc, AdvectionForm form) {
  ScalarField out = divergence_from_faces(face_product(u, face_average(phi_old, phi_bc)));
  if (form == AdvectionForm::Conservative) {
    out.values() -= phi_old.values() * st_field.values();
  } else {
    out.values() -= phi_old.values() * divergence_from_faces(u).values();
  }
  return out;
}

double free_energy(const ScalarField& phi, const ModelParams& params, Bc phi_bc) {
  const PotentialSpec pot = params.potential();
  double bulk = 0.0;
  for (Eigen::Index k = 0; k < phi.grid().cells(); ++k) bulk += potential_value(phi[k], pot);
  bulk *= phi.grid().cell_volume();
  return 0.5 * params.eps * params.eps * face_norm_sq(gradient_to_faces(phi, phi_bc)) + bulk;
}

namespace {

struct Residual {
  ScalarField r1;  // dt-scaled phase equation
  ScalarField r2;  // chemical potential equation
  double merit;
};

class StepSystem {
 public:
  explicit StepSystem(const CHStepInput& in)
      : in_(in),
        pot_(in.params.potential()),
        transport_(ch_transport_term(in.phi_old, in.u, in.st_field, in.bc.phi, in.form)),
        dB_(in.phi_old.grid()) {
    for (Eigen::Index k = 0; k < dB_.grid().cells(); ++k) dB_[k] = potential_dB(in.phi_old[k], pot_);
  }

  Residual residual(const ScalarField& phi, const ScalarField& mu) const {
    const double dt = in_.dt;
    const double delta = in_.params.delta;
    const double eps2 = in_.params.eps * in_.params.eps;
    const GridSpec& g = phi.grid();

    ScalarField dmu(g);
    dmu.values() = mu.values() - in_.mu_old.values();
    const auto lap_mu = laplacian(mu, in_.bc.mu);
    const auto lap_phi = laplacian(phi, in_.bc.phi);

    Residual r{ScalarField(g), ScalarField(g), 0.0};
    r.r1.values() = (phi.values() - in_.phi_old.values()) - lap_mu.values() * dt + transport_.values() * dt;
    if (delta != 0.0) r.r1.values() -= delta * laplacian(dmu, in_.bc.mu).values();
    for (Eigen::Index k = 0; k < g.cells(); ++k) {
      r.r2[k] = mu[k] + eps2 * lap_phi[k] - potential_dC(phi[k]) - dB_[k];
    }
    r.merit = std::max(r.r1.values().abs().maxCoeff(), r.r2.values().abs().maxCoeff());
    return r;
  }

  const PotentialSpec& potential() const { return pot_; }

 private:
  const CHStepInput& in_;
  PotentialSpec pot_;
  ScalarField transport_;
  ScalarField dB_;
};

bool inside(const ScalarField& phi, double margin) {
  return phi.min() >= margin && phi.max() <= 1.0 - margin;
}

// Symmetric quasi-definite Newton matrix
//   [ K    -I        ]   K = diag(C''(phi)) - eps^2 L_phi
//   [ -I   -dt a G   ]   G = -L_mu, a = 1 + delta/dt
// acting on (dphi, dmu) with right-hand side (R2, dt R1).
class NewtonMatrix {
 public:
  NewtonMatrix(const GridSpec& g, const CHStepInput& in) : n_(g.cells()) {
    using Sp = Eigen::SparseMatrix<double>;
    const Sp lphi = laplacian_matrix<double>(g, in.bc.phi);
    const Sp lmu = laplacian_matrix<double>(g, in.bc.mu);
    const double eps2 = in.params.eps * in.params.eps;
    const double a = in.dt + in.params.delta;

    std::vector<Eigen::Triplet<double>> t;
    t.reserve(std::size_t(lphi.nonZeros() + lmu.nonZeros() + 3 * n_));
    for (Eigen::Index c = 0; c < lphi.outerSize(); ++c) {
      for (Sp::InnerIterator it(lphi, c); it; ++it) t.emplace_back(it.row(), it.col(), -eps2 * it.value());
    }
    for (Eigen::Index k = 0; k < n_; ++k) t.emplace_back(k, k, 0.0);  // C'' slot
    for (Eigen::Index c = 0; c < lmu.outerSize(); ++c) {
      for (Sp::InnerIterator it(lmu, c); it; ++it) t.emplace_back(n_ + it.row(), n_ + it.col(), a * it.value());
    }
    for (Eigen::Index k = 0; k < n_; ++k) {
      t.emplace_back(k, n_ + k, -1.0);
      t.emplace_back(n_ + k, k, -1.0);
    }
    m_.resize(2 * n_, 2 * n_);
    m_.setFromTriplets(t.begin(), t.end());
    m_.makeCompressed();
    base_diag_.resize(n_);
    for (Eigen::Index k = 0; k < n_; ++k) base_diag_[k] = m_.coeff(k, k);
    ldlt_.analyzePattern(m_);
  }

  Eigen::VectorXd solve(const ScalarField& phi, const Eigen::VectorXd& rhs) {
    for (Eigen::Index k = 0; k < n_; ++k) m_.coeffRef(k, k) = base_diag_[k] + potential_d2C(phi[k]);
    ldlt_.factorize(m_);
    if (ldlt_.info() == Eigen::Success) {
      Eigen::VectorXd x = ldlt_.solve(rhs);
      if (ldlt_.info() == Eigen::Success && x.allFinite()) return x;
    }
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(m_);
    if (lu.info() != Eigen::Success) throw NewtonDivergence("Newton matrix is singular");
    return lu.solve(rhs);
  }

 private:
  Eigen::Index n_;
  Eigen::SparseMatrix<double> m_;
  Eigen::VectorXd base_diag_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
};

}  // namespace

std::pair<ScalarField, ScalarField> ch_residual(const CHStepInput& in, const ScalarField& phi,
                                                const ScalarField& mu) {
  StepSystem sys(in);
  auto r = sys.residual(phi, mu);
  return {std::move(r.r1), std::move(r.r2)};
}

CHStepResult ch_step(const CHStepInput& in) {
  const GridSpec& g = in.phi_old.grid();
  const double margin = in.params.clamp_margin;
  if (!(in.dt > 0.0)) throw Error("Cahn-Hilliard step needs dt > 0");
  if (!inside(in.phi_old, margin)) {
    std::ostringstream os;
    os << "phase field outside [" << margin << ", " << 1.0 - margin << "] at step start (range "
       << in.phi_old.min() << " .. " << in.phi_old.max() << ")";
    throw DomainViolation(os.str());
  }

  StepSystem sys(in);
  ScalarField phi = in.phi_guess ? *in.phi_guess : in.phi_old;
  ScalarField mu = in.mu_guess ? *in.mu_guess : in.mu_old;
  phi.values() = phi.values().max(margin).min(1.0 - margin);

  NewtonMatrix jac(g, in);
  const Eigen::Index n = g.cells();
  Residual res = sys.residual(phi, mu);
  int iter = 0;
  int stalled = 0;
  while (res.merit > in.params.newton_tol) {
    if (iter == in.params.newton_max_iter) {
      std::ostringstream os;
      os << "Newton did not converge in " << iter << " iterations (residual " << res.merit << ", "
         << stalled << " line-search failures)";
      throw NewtonDivergence(os.str());
    }
    ++iter;
    Eigen::VectorXd rhs(2 * n);
    rhs.head(n) = res.r2.values().matrix();
    rhs.tail(n) = res.r1.values().matrix();
    const Eigen::VectorXd d = jac.solve(phi, rhs);

    double s = 1.0;
    ScalarField phi_t(g);
    ScalarField mu_t(g);
    auto trial = [&](double step) {
      phi_t.values() = phi.values() + step * d.head(n).array();
      mu_t.values() = mu.values() + step * d.tail(n).array();
    };
    trial(s);
    int halvings = 0;
    while (!inside(phi_t, margin)) {
      if (++halvings > 60) throw DomainEscape("Newton update cannot be damped into the potential domain");
      s *= 0.5;
      trial(s);
    }
    Residual res_t = sys.residual(phi_t, mu_t);
    int backtracks = 0;
    while (res_t.merit > (1.0 - 1e-4 * s) * res.merit && backtracks < 20) {
      s *= 0.5;
      ++backtracks;
      trial(s);
      res_t = sys.residual(phi_t, mu_t);
    }
    if (backtracks == 20) ++stalled;
    phi = std::move(phi_t);
    mu = std::move(mu_t);
    res = std::move(res_t);
  }
  return {std::move(phi), std::move(mu), SolveReport{iter, res.merit, true}};
}

}  // namespace tumorsim
