#pragma once

// Discrete calculus on the cell-centered / MAC-staggered grid.
//
// Boundary faces see a ghost value behind the wall: ghost = interior for
// no-flux conditions and ghost = 2 g - interior for a Dirichlet value g.
// laplacian() is divergence_from_faces(gradient_to_faces(.)) and is never a
// separately coded stencil.

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <vector>

#include "tumorsim/grid.hpp"

namespace tumorsim {

template <typename Scalar>
BasicFaceField<Scalar> gradient_to_faces(const BasicScalarField<Scalar>& f, Bc bc) {
  const GridSpec& g = f.grid();
  const int nx = g.nx();
  const int ny = g.ny();
  const Scalar ihx = Scalar(1) / g.hx();
  const Scalar ihy = Scalar(1) / g.hy();
  const bool dir = is_dirichlet(bc);
  const Scalar gv = Scalar(dirichlet_value(bc));

  BasicFaceField<Scalar> out(g);
  for (int j = 0; j < ny; ++j) {
    for (int i = 1; i < nx; ++i) out.xf(i, j) = (f(i, j) - f(i - 1, j)) * ihx;
    out.xf(0, j) = dir ? Scalar(2) * (f(0, j) - gv) * ihx : Scalar(0);
    out.xf(nx, j) = dir ? Scalar(2) * (gv - f(nx - 1, j)) * ihx : Scalar(0);
  }
  for (int i = 0; i < nx; ++i) {
    for (int j = 1; j < ny; ++j) out.yf(i, j) = (f(i, j) - f(i, j - 1)) * ihy;
    out.yf(i, 0) = dir ? Scalar(2) * (f(i, 0) - gv) * ihy : Scalar(0);
    out.yf(i, ny) = dir ? Scalar(2) * (gv - f(i, ny - 1)) * ihy : Scalar(0);
  }
  return out;
}

template <typename Scalar>
BasicScalarField<Scalar> divergence_from_faces(const BasicFaceField<Scalar>& v) {
  const GridSpec& g = v.grid();
  const Scalar ihx = Scalar(1) / g.hx();
  const Scalar ihy = Scalar(1) / g.hy();
  BasicScalarField<Scalar> out(g);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      out(i, j) = (v.xf(i + 1, j) - v.xf(i, j)) * ihx + (v.yf(i, j + 1) - v.yf(i, j)) * ihy;
    }
  }
  return out;
}

template <typename Scalar>
BasicScalarField<Scalar> laplacian(const BasicScalarField<Scalar>& f, Bc bc) {
  return divergence_from_faces(gradient_to_faces(f, bc));
}

/// Face values by arithmetic averaging of the two adjacent cells (ghost on the wall).
template <typename Scalar>
BasicFaceField<Scalar> face_average(const BasicScalarField<Scalar>& f, Bc bc) {
  const GridSpec& g = f.grid();
  const int nx = g.nx();
  const int ny = g.ny();
  const bool dir = is_dirichlet(bc);
  const Scalar gv = Scalar(dirichlet_value(bc));

  BasicFaceField<Scalar> out(g);
  for (int j = 0; j < ny; ++j) {
    for (int i = 1; i < nx; ++i) out.xf(i, j) = Scalar(0.5) * (f(i, j) + f(i - 1, j));
    out.xf(0, j) = dir ? gv : f(0, j);
    out.xf(nx, j) = dir ? gv : f(nx - 1, j);
  }
  for (int i = 0; i < nx; ++i) {
    for (int j = 1; j < ny; ++j) out.yf(i, j) = Scalar(0.5) * (f(i, j) + f(i, j - 1));
    out.yf(i, 0) = dir ? gv : f(i, 0);
    out.yf(i, ny) = dir ? gv : f(i, ny - 1);
  }
  return out;
}

/// Midpoint quadrature.
template <typename Scalar>
Scalar integrate(const BasicScalarField<Scalar>& f) {
  return f.values().sum() * Scalar(f.grid().cell_volume());
}

template <typename Scalar>
Scalar cell_inner(const BasicScalarField<Scalar>& a, const BasicScalarField<Scalar>& b) {
  return (a.values() * b.values()).sum() * Scalar(a.grid().cell_volume());
}

/// Face quadrature: interior faces carry one cell volume, boundary faces half
/// of one. With this weight <div v, f> = -<v, grad f> for Dirichlet-zero f.
template <typename Scalar>
Scalar face_inner(const BasicFaceField<Scalar>& a, const BasicFaceField<Scalar>& b) {
  const GridSpec& g = a.grid();
  Scalar s = (a.x() * b.x()).sum() + (a.y() * b.y()).sum();
  Scalar edge(0);
  for (int j = 0; j < g.ny(); ++j) {
    edge += a.xf(0, j) * b.xf(0, j) + a.xf(g.nx(), j) * b.xf(g.nx(), j);
  }
  for (int i = 0; i < g.nx(); ++i) {
    edge += a.yf(i, 0) * b.yf(i, 0) + a.yf(i, g.ny()) * b.yf(i, g.ny());
  }
  return (s - Scalar(0.5) * edge) * Scalar(g.cell_volume());
}

template <typename Scalar>
Scalar face_norm_sq(const BasicFaceField<Scalar>& a) {
  return face_inner(a, a);
}

template <typename Scalar>
Scalar l2_norm(const BasicScalarField<Scalar>& f) {
  return std::sqrt(cell_inner(f, f));
}

/// Net outward flux of v through the domain boundary.
template <typename Scalar>
Scalar boundary_outflow(const BasicFaceField<Scalar>& v) {
  const GridSpec& g = v.grid();
  Scalar s(0);
  for (int j = 0; j < g.ny(); ++j) s += (v.xf(g.nx(), j) - v.xf(0, j)) * Scalar(g.hy());
  for (int i = 0; i < g.nx(); ++i) s += (v.yf(i, g.ny()) - v.yf(i, 0)) * Scalar(g.hx());
  return s;
}

template <typename Scalar>
BasicFaceField<Scalar> face_product(const BasicFaceField<Scalar>& a, const BasicFaceField<Scalar>& b) {
  BasicFaceField<Scalar> out(a.grid());
  out.x() = a.x() * b.x();
  out.y() = a.y() * b.y();
  return out;
}

/// Scalar curl dv_y/dx - dv_x/dy at the interior grid nodes (i, j),
/// 1 <= i < nx, 1 <= j < ny, stored at (i-1) + (nx-1)(j-1).
template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> curl_at_nodes(const BasicFaceField<Scalar>& v) {
  const GridSpec& g = v.grid();
  const int mx = g.nx() - 1;
  Eigen::Array<Scalar, Eigen::Dynamic, 1> out(Eigen::Index(mx) * (g.ny() - 1));
  for (int j = 1; j < g.ny(); ++j) {
    for (int i = 1; i < g.nx(); ++i) {
      out[(i - 1) + Eigen::Index(mx) * (j - 1)] = (v.yf(i, j) - v.yf(i - 1, j)) / g.hx() -
                                                  (v.xf(i, j) - v.xf(i, j - 1)) / g.hy();
    }
  }
  return out;
}

/// a_x b_y - a_y b_x at interior nodes from the four surrounding cells.
template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> node_jacobian(const BasicScalarField<Scalar>& a,
                                                      const BasicScalarField<Scalar>& b) {
  const GridSpec& g = a.grid();
  const int mx = g.nx() - 1;
  const Scalar hx = g.hx();
  const Scalar hy = g.hy();
  Eigen::Array<Scalar, Eigen::Dynamic, 1> out(Eigen::Index(mx) * (g.ny() - 1));
  auto dx = [&](const BasicScalarField<Scalar>& f, int i, int j) {
    return ((f(i, j) - f(i - 1, j)) + (f(i, j - 1) - f(i - 1, j - 1))) / (Scalar(2) * hx);
  };
  auto dy = [&](const BasicScalarField<Scalar>& f, int i, int j) {
    return ((f(i, j) - f(i, j - 1)) + (f(i - 1, j) - f(i - 1, j - 1))) / (Scalar(2) * hy);
  };
  for (int j = 1; j < g.ny(); ++j) {
    for (int i = 1; i < g.nx(); ++i) {
      out[(i - 1) + Eigen::Index(mx) * (j - 1)] = dx(a, i, j) * dy(b, i, j) - dy(a, i, j) * dx(b, i, j);
    }
  }
  return out;
}

/// Sparse matrix of the linear part of laplacian(., bc): for Dirichlet data
/// the boundary value is dropped (homogeneous counterpart).
template <typename Scalar>
Eigen::SparseMatrix<Scalar> laplacian_matrix(const GridSpec& g, Bc bc) {
  const Scalar ihx2 = Scalar(1) / (g.hx() * g.hx());
  const Scalar ihy2 = Scalar(1) / (g.hy() * g.hy());
  // A wall contributes -2/h^2 (Dirichlet) or 0 (no-flux) to the diagonal.
  const Scalar wall = is_dirichlet(bc) ? Scalar(2) : Scalar(0);
  std::vector<Eigen::Triplet<Scalar>> t;
  t.reserve(std::size_t(g.cells()) * 5);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const auto c = g.cell(i, j);
      Scalar diag(0);
      if (i > 0) {
        t.emplace_back(c, g.cell(i - 1, j), ihx2);
        diag -= ihx2;
      } else {
        diag -= wall * ihx2;
      }
      if (i + 1 < g.nx()) {
        t.emplace_back(c, g.cell(i + 1, j), ihx2);
        diag -= ihx2;
      } else {
        diag -= wall * ihx2;
      }
      if (j > 0) {
        t.emplace_back(c, g.cell(i, j - 1), ihy2);
        diag -= ihy2;
      } else {
        diag -= wall * ihy2;
      }
      if (j + 1 < g.ny()) {
        t.emplace_back(c, g.cell(i, j + 1), ihy2);
        diag -= ihy2;
      } else {
        diag -= wall * ihy2;
      }
      t.emplace_back(c, c, diag);
    }
  }
  Eigen::SparseMatrix<Scalar> m(g.cells(), g.cells());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

/// Diagonal of laplacian_matrix without assembling it.
template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> laplacian_diagonal(const GridSpec& g, Bc bc) {
  const Scalar ihx2 = Scalar(1) / (g.hx() * g.hx());
  const Scalar ihy2 = Scalar(1) / (g.hy() * g.hy());
  const Scalar wall = is_dirichlet(bc) ? Scalar(2) : Scalar(0);
  Eigen::Array<Scalar, Eigen::Dynamic, 1> d(g.cells());
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const Scalar ex = (i == 0 ? wall : Scalar(1)) + (i + 1 == g.nx() ? wall : Scalar(1));
      const Scalar ey = (j == 0 ? wall : Scalar(1)) + (j + 1 == g.ny() ? wall : Scalar(1));
      d[g.cell(i, j)] = -(ex * ihx2 + ey * ihy2);
    }
  }
  return d;
}

}  // namespace tumorsim
