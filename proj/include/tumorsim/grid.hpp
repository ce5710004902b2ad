#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <string>

#include "tumorsim/errors.hpp"

namespace tumorsim {

/// Uniform rectangular grid on [0, lx] x [0, ly] with nx x ny cells.
/// Cell (i, j) is stored at index i + nx * j (x fastest).
class GridSpec {
 public:
  GridSpec(int nx, int ny, double lx, double ly) : nx_(nx), ny_(ny), lx_(lx), ly_(ly) {
    if (nx < 4 || ny < 4) {
      throw InvalidGrid("grid needs at least 4 cells per direction, got " + std::to_string(nx) +
                        "x" + std::to_string(ny));
    }
    if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly)) {
      throw InvalidGrid("grid side lengths must be positive and finite");
    }
  }

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double lx() const { return lx_; }
  double ly() const { return ly_; }
  double hx() const { return lx_ / nx_; }
  double hy() const { return ly_ / ny_; }
  double cell_volume() const { return hx() * hy(); }

  Eigen::Index cells() const { return Eigen::Index(nx_) * ny_; }
  Eigen::Index x_faces() const { return Eigen::Index(nx_ + 1) * ny_; }
  Eigen::Index y_faces() const { return Eigen::Index(nx_) * (ny_ + 1); }

  Eigen::Index cell(int i, int j) const { return i + Eigen::Index(nx_) * j; }
  /// x-face i sits at x = i * hx, between cells (i-1, j) and (i, j).
  Eigen::Index xface(int i, int j) const { return i + Eigen::Index(nx_ + 1) * j; }
  /// y-face j sits at y = j * hy, between cells (i, j-1) and (i, j).
  Eigen::Index yface(int i, int j) const { return i + Eigen::Index(nx_) * j; }

  double xc(int i) const { return (i + 0.5) * hx(); }
  double yc(int j) const { return (j + 0.5) * hy(); }

  friend bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.nx_ == b.nx_ && a.ny_ == b.ny_ && a.lx_ == b.lx_ && a.ly_ == b.ly_;
  }

 private:
  int nx_;
  int ny_;
  double lx_;
  double ly_;
};

/// Cell-centered samples of one scalar unknown.
template <typename Scalar>
class BasicScalarField {
 public:
  using Values = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  explicit BasicScalarField(const GridSpec& grid, Scalar value = Scalar(0))
      : grid_(grid), values_(Values::Constant(grid.cells(), value)) {}

  BasicScalarField(const GridSpec& grid, Values values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.cells()) {
      throw InvalidGrid("scalar field size does not match grid");
    }
  }

  /// Samples f(x, y) at the cell centers.
  template <typename F>
  static BasicScalarField sample(const GridSpec& grid, F&& f) {
    BasicScalarField out(grid);
    for (int j = 0; j < grid.ny(); ++j) {
      for (int i = 0; i < grid.nx(); ++i) {
        out(i, j) = static_cast<Scalar>(f(grid.xc(i), grid.yc(j)));
      }
    }
    return out;
  }

  const GridSpec& grid() const { return grid_; }
  const Values& values() const { return values_; }
  Values& values() { return values_; }

  Scalar& operator()(int i, int j) { return values_[grid_.cell(i, j)]; }
  Scalar operator()(int i, int j) const { return values_[grid_.cell(i, j)]; }
  Scalar& operator[](Eigen::Index k) { return values_[k]; }
  Scalar operator[](Eigen::Index k) const { return values_[k]; }

  Scalar min() const { return values_.minCoeff(); }
  Scalar max() const { return values_.maxCoeff(); }
  bool all_finite() const { return values_.allFinite(); }

 private:
  GridSpec grid_;
  Values values_;
};

/// Face-normal components on a MAC-staggered layout.
template <typename Scalar>
class BasicFaceField {
 public:
  using Values = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  explicit BasicFaceField(const GridSpec& grid, Scalar value = Scalar(0))
      : grid_(grid),
        x_(Values::Constant(grid.x_faces(), value)),
        y_(Values::Constant(grid.y_faces(), value)) {}

  const GridSpec& grid() const { return grid_; }
  const Values& x() const { return x_; }
  const Values& y() const { return y_; }
  Values& x() { return x_; }
  Values& y() { return y_; }

  Scalar& xf(int i, int j) { return x_[grid_.xface(i, j)]; }
  Scalar xf(int i, int j) const { return x_[grid_.xface(i, j)]; }
  Scalar& yf(int i, int j) { return y_[grid_.yface(i, j)]; }
  Scalar yf(int i, int j) const { return y_[grid_.yface(i, j)]; }

  Scalar max_abs() const {
    return std::max(x_.abs().maxCoeff(), y_.abs().maxCoeff());
  }
  bool all_finite() const { return x_.allFinite() && y_.allFinite(); }

 private:
  GridSpec grid_;
  Values x_;
  Values y_;
};

using ScalarField = BasicScalarField<double>;
using FaceVectorField = BasicFaceField<double>;

/// Boundary condition of one field on the whole boundary.
enum class Bc { DirichletZero, DirichletOne, NeumannZero, NoFlux };

inline bool is_dirichlet(Bc bc) { return bc == Bc::DirichletZero || bc == Bc::DirichletOne; }
inline double dirichlet_value(Bc bc) { return bc == Bc::DirichletOne ? 1.0 : 0.0; }
std::string to_string(Bc bc);

/// Per-unknown boundary tags. The defaults are the tumor-model conditions:
/// mu = Pi = 0 and n = 1 on the boundary, no-flux for Phi.
struct BoundarySpec {
  Bc mu = Bc::DirichletZero;
  Bc pi = Bc::DirichletZero;
  Bc n = Bc::DirichletOne;
  Bc phi = Bc::NeumannZero;
  Bc p = Bc::DirichletZero;  // only used by the diffusive transport variant

  /// Impermeable-boundary variant: u . nu = 0, pressure with a zero-mean gauge.
  static BoundarySpec singular_limit() {
    BoundarySpec b;
    b.pi = Bc::NoFlux;
    return b;
  }
};

}  // namespace tumorsim
