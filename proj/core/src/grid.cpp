// SPDX-License-Identifier: Apache-2.0
#include "diracfc/grid.hpp"

#include <cmath>

#include "diracfc/errors.hpp"

namespace diracfc {

void GridSpec::validate() const {
  if (n < 1 || n > kMaxDimension) throw ArgumentError("grid dimension must be in 1..3");
  if (m < 2) throw ArgumentError("grid needs at least 2 points per axis");
  if (!(length > 0.0) || !std::isfinite(length)) throw ArgumentError("grid length must be positive");
}

double GridSpec::cellVolume() const { return std::pow(spacing(), n); }

Index GridSpec::points() const {
  Index p = 1;
  for (int k = 0; k < n; ++k) p *= m;
  return p;
}

int GridSpec::levels() const {
  if (!dyadic()) throw ArgumentError("dyadic operations need m to be a power of two");
  int j = 0;
  while ((1 << j) < m) ++j;
  return j;
}

std::array<int, kMaxDimension> GridSpec::coords(Index point) const {
  std::array<int, kMaxDimension> c{};
  for (int k = 0; k < n; ++k) {
    c[static_cast<std::size_t>(k)] = static_cast<int>(point % m);
    point /= m;
  }
  return c;
}

Index GridSpec::point(const std::array<int, kMaxDimension>& c) const {
  Index p = 0;
  for (int k = n - 1; k >= 0; --k) {
    const int v = ((c[static_cast<std::size_t>(k)] % m) + m) % m;
    p = p * m + v;
  }
  return p;
}

Index GridSpec::shifted(Index p, int axis, int delta) const {
  auto c = coords(p);
  c[static_cast<std::size_t>(axis - 1)] += delta;
  return point(c);
}

double Field::norm() const { return std::sqrt(space.grid.cellVolume()) * values.norm(); }

MatrixField MatrixField::constant(const GridSpec& grid, const Matrix& value) {
  if (value.rows() != value.cols()) throw ArgumentError("matrix field values must be square");
  MatrixField f;
  f.grid = grid;
  f.dim = static_cast<int>(value.rows());
  f.values.assign(static_cast<std::size_t>(grid.points()), value);
  return f;
}

MatrixField MatrixField::inverse() const {
  MatrixField out = *this;
  for (auto& v : out.values) {
    Eigen::FullPivLU<Matrix> lu(v);
    if (!lu.isInvertible()) throw NumericalError("matrix field is singular at some point");
    v = lu.inverse();
  }
  return out;
}

MatrixField MatrixField::adjoint() const {
  MatrixField out = *this;
  for (auto& v : out.values) v = v.adjoint().eval();
  return out;
}

double MatrixField::supNorm() const {
  double s = 0.0;
  for (const auto& v : values) {
    Eigen::JacobiSVD<Matrix> svd(v);
    s = std::max(s, svd.singularValues().size() ? svd.singularValues()(0) : 0.0);
  }
  return s;
}

MatrixField MatrixField::operator+(const MatrixField& other) const {
  if (other.dim != dim || other.values.size() != values.size()) throw ArgumentError("matrix field shapes differ");
  MatrixField out = *this;
  for (std::size_t i = 0; i < values.size(); ++i) out.values[i] += other.values[i];
  return out;
}

MatrixField MatrixField::operator-(const MatrixField& other) const { return *this + other.scaled(-1.0); }

MatrixField MatrixField::scaled(Complex s) const {
  MatrixField out = *this;
  for (auto& v : out.values) v *= s;
  return out;
}

}  // namespace diracfc
