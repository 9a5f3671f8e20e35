// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

#include "diracfc/gridops.hpp"
#include "diracfc/linalg.hpp"
#include "diracfc/types.hpp"

namespace diracfc::testing {

// Seeded generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double normal() { return normal_(rng_); }
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }
  std::uint64_t seed() { return rng_(); }

  Vector vector(Index n) {
    Vector v(n);
    for (auto& x : v) x = Complex(normal(), normal());
    return v;
  }
  Matrix matrix(Index r, Index c) {
    Matrix m(r, c);
    for (Index j = 0; j < c; ++j)
      for (Index i = 0; i < r; ++i) m(i, j) = Complex(normal(), normal());
    return m;
  }
  Matrix hermitian(Index n) {
    const Matrix m = matrix(n, n);
    return 0.5 * (m + m.adjoint());
  }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

inline double opNorm(const Matrix& a) { return linalg::opNorm(a); }

inline Matrix identity(Index n) { return Matrix::Identity(n, n); }

inline PiBSystem randomSystem(const GridSpec& grid, double omega, std::uint64_t seed) {
  const auto b = randomAccretive(grid, FiberLayout::forms(grid.n), omega, seed);
  return buildPiB(formsTriple(grid, b.b1, b.b2));
}

inline MatrixField randomField(const GridSpec& grid, int dim, double size, Gen& gen) {
  MatrixField f = MatrixField::constant(grid, Matrix::Zero(dim, dim));
  for (Index pt = 0; pt < grid.points(); ++pt) f.at(pt) = gen.matrix(dim, dim);
  return f.scaled(size / f.supNorm());
}

// Base triple with a direction (A1, A2) along which Gamma^* B2 B1 Gamma^* = 0 stays exact.
struct Family {
  Triple base;
  LinearOperator a1;
  LinearOperator a2;
};

// grad : C^1 -> C^n with accretive coefficient blocks, perturbed blockwise.
inline Family blockFamily(const GridSpec& grid, double omega, std::uint64_t seed) {
  Gen gen(seed);
  const LinearOperator d = buildGradient(grid);
  const MatrixField c1 = randomAccretiveField(grid, 1, omega, gen.seed());
  const MatrixField c2 = randomAccretiveField(grid, grid.n, omega, gen.seed());
  const Triple base = buildBlockTriple(d, c1, c2);
  const Triple moved = buildBlockTriple(d, c1 + randomField(grid, 1, 1.0, gen), c2 + randomField(grid, grid.n, 1.0, gen));
  return {base, moved.b1 - base.b1, moved.b2 - base.b2};
}

// Forms triple moved along B2 + zA, B1 - z B1 A B1, which keeps B1 = B2^{-1} to first order.
inline Family inverseFamily(const GridSpec& grid, double omega, std::uint64_t seed) {
  Gen gen(seed);
  const auto b = randomAccretive(grid, FiberLayout::forms(grid.n), omega, gen.seed());
  const Triple base = formsTriple(grid, b.b1, b.b2);
  const MatrixField a = randomField(grid, FiberLayout::forms(grid.n).dim(), 1.0, gen);
  MatrixField a1 = a;
  for (Index pt = 0; pt < grid.points(); ++pt) a1.at(pt) = -b.b1.at(pt) * a.at(pt) * b.b1.at(pt);
  return {base, multiplication(a1, base.space()), multiplication(a, base.space())};
}

}  // namespace diracfc::testing
