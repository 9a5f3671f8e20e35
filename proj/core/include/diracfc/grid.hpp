// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <vector>

#include "diracfc/exterior.hpp"
#include "diracfc/types.hpp"

namespace diracfc {

// Periodic cubical grid on the torus [0, L)^n with m points per axis.
struct GridSpec {
  int n = 1;
  int m = 8;
  double length = 1.0;

  void validate() const;
  double spacing() const { return length / m; }
  double cellVolume() const;
  Index points() const;
  bool dyadic() const { return m >= 2 && (m & (m - 1)) == 0; }
  int levels() const;  // log2(m) for dyadic grids

  std::array<int, kMaxDimension> coords(Index point) const;
  Index point(const std::array<int, kMaxDimension>& coords) const;  // wraps periodically
  Index shifted(Index point, int axis, int delta) const;          // axis in 1..n

  bool operator==(const GridSpec&) const = default;
};

// Component-major layout: global index = component * points + point.
struct Space {
  GridSpec grid;
  FiberLayout fiber = FiberLayout::plain(1);

  Index dim() const { return grid.points() * fiber.dim(); }
  Index index(Index point, int component) const { return static_cast<Index>(component) * grid.points() + point; }

  bool operator==(const Space&) const = default;
};

struct Field {
  Space space;
  Vector values;

  static Field zeros(const Space& space) { return {space, Vector::Zero(space.dim())}; }
  // L^2 norm with cell-volume weight.
  double norm() const;
};

// One small dense matrix per grid point; defines a multiplication operator.
struct MatrixField {
  GridSpec grid;
  int dim = 1;
  std::vector<Matrix> values;

  static MatrixField constant(const GridSpec& grid, const Matrix& value);
  static MatrixField identity(const GridSpec& grid, int dim) { return constant(grid, Matrix::Identity(dim, dim)); }

  const Matrix& at(Index point) const { return values.at(static_cast<std::size_t>(point)); }
  Matrix& at(Index point) { return values.at(static_cast<std::size_t>(point)); }

  MatrixField inverse() const;
  MatrixField adjoint() const;
  // max over points of the spectral norm
  double supNorm() const;
  MatrixField operator+(const MatrixField& other) const;
  MatrixField operator-(const MatrixField& other) const;
  MatrixField scaled(Complex s) const;
};

}  // namespace diracfc
