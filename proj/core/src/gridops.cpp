// SPDX-License-Identifier: Apache-2.0
#include "diracfc/gridops.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "diracfc/errors.hpp"
#include "diracfc/linalg.hpp"

namespace diracfc {

LinearOperator buildGamma(const GridSpec& grid) {
  grid.validate();
  const Space space{grid, FiberLayout::forms(grid.n)};
  const Index points = grid.points();
  const double inv = 1.0 / grid.spacing();
  std::vector<Triplet> entries;
  for (int c = 0; c < space.fiber.dim(); ++c) {
    const MultiIndex s = space.fiber.mask(c);
    for (int k = 1; k <= grid.n; ++k) {
      const auto sign = insertionSign(k, s, grid.n);
      if (!sign) continue;
      const int target = space.fiber.component(withAxis(s, k));
      for (Index p = 0; p < points; ++p) {
        const Index row = space.index(p, target);
        entries.emplace_back(row, space.index(grid.shifted(p, k, 1), c), *sign * inv);
        entries.emplace_back(row, space.index(p, c), -*sign * inv);
      }
    }
  }
  SparseMatrix m(space.dim(), space.dim());
  m.setFromTriplets(entries.begin(), entries.end());
  return {space, space, std::move(m), OperatorTag::Gamma};
}

LinearOperator buildAdjoint(const LinearOperator& op) { return op.adjoint(); }

LinearOperator buildComponentGradient(const Space& space) {
  const GridSpec& grid = space.grid;
  grid.validate();
  const int dim = space.fiber.dim();
  const Space target{grid, FiberLayout::plain(dim * grid.n)};
  const double inv = 1.0 / grid.spacing();
  std::vector<Triplet> entries;
  for (int c = 0; c < dim; ++c)
    for (int k = 1; k <= grid.n; ++k)
      for (Index p = 0; p < grid.points(); ++p) {
        const Index row = target.index(p, c * grid.n + (k - 1));
        entries.emplace_back(row, space.index(grid.shifted(p, k, 1), c), inv);
        entries.emplace_back(row, space.index(p, c), -inv);
      }
  SparseMatrix m(target.dim(), space.dim());
  m.setFromTriplets(entries.begin(), entries.end());
  return {space, target, std::move(m), OperatorTag::Generic};
}

LinearOperator buildGradient(const GridSpec& grid) {
  return buildComponentGradient(Space{grid, FiberLayout::plain(1)});
}

LinearOperator buildCentralDerivative(const GridSpec& grid) {
  grid.validate();
  if (grid.n != 1) throw ArgumentError("central derivative is defined on 1D grids");
  const Space space{grid, FiberLayout::plain(1)};
  const double inv = 0.5 / grid.spacing();
  std::vector<Triplet> entries;
  for (Index p = 0; p < grid.points(); ++p) {
    entries.emplace_back(p, grid.shifted(p, 1, 1), inv);
    entries.emplace_back(p, grid.shifted(p, 1, -1), -inv);
  }
  SparseMatrix m(space.dim(), space.dim());
  m.setFromTriplets(entries.begin(), entries.end());
  return {space, space, std::move(m), OperatorTag::Generic};
}

LinearOperator multiplication(const MatrixField& field, const Space& space) {
  if (!(field.grid == space.grid)) throw ArgumentError("matrix field lives on a different grid");
  if (field.dim != space.fiber.dim()) throw ArgumentError("matrix field dimension does not match the fiber");
  std::vector<Triplet> entries;
  for (Index p = 0; p < space.grid.points(); ++p) {
    const Matrix& v = field.at(p);
    for (int i = 0; i < field.dim; ++i)
      for (int j = 0; j < field.dim; ++j)
        if (v(i, j) != Complex(0.0)) entries.emplace_back(space.index(p, i), space.index(p, j), v(i, j));
  }
  SparseMatrix m(space.dim(), space.dim());
  m.setFromTriplets(entries.begin(), entries.end());
  return {space, space, std::move(m), OperatorTag::Multiplier};
}

Triple formsTriple(const GridSpec& grid, const MatrixField& b1, const MatrixField& b2) {
  LinearOperator gamma = buildGamma(grid);
  const Space& space = gamma.domain();
  return {gamma, multiplication(b1, space), multiplication(b2, space)};
}

Triple flatFormsTriple(const GridSpec& grid) {
  LinearOperator gamma = buildGamma(grid);
  const Space space = gamma.domain();
  return {std::move(gamma), LinearOperator::identity(space), LinearOperator::identity(space)};
}

Triple buildBlockTriple(const LinearOperator& d, const MatrixField& a1, const MatrixField& a2) {
  const GridSpec& grid = d.domain().grid;
  if (!(d.codomain().grid == grid)) throw ArgumentError("D must map between fields on one grid");
  const int n1 = d.domain().fiber.dim();
  const int n2 = d.codomain().fiber.dim();
  if (a1.dim != n1 || a2.dim != n2) throw ArgumentError("multiplier dimensions do not match D");
  const Space space{grid, FiberLayout::plain(n1 + n2)};
  const Index offset = static_cast<Index>(n1) * grid.points();

  std::vector<Triplet> entries;
  const SparseMatrix ds = d.toSparse();
  for (Index k = 0; k < ds.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(ds, k); it; ++it) entries.emplace_back(offset + it.row(), it.col(), it.value());
  SparseMatrix g(space.dim(), space.dim());
  g.setFromTriplets(entries.begin(), entries.end());

  MatrixField b1 = MatrixField::constant(grid, Matrix::Zero(n1 + n2, n1 + n2));
  MatrixField b2 = b1;
  for (Index p = 0; p < grid.points(); ++p) {
    b1.at(p).topLeftCorner(n1, n1) = a1.at(p);
    b2.at(p).bottomRightCorner(n2, n2) = a2.at(p);
  }
  return {LinearOperator(space, space, std::move(g), OperatorTag::Gamma), multiplication(b1, space),
          multiplication(b2, space)};
}

PiBSystem buildPiB(const Triple& t) {
  if (!(t.b1.domain() == t.gamma.domain()) || !(t.b2.domain() == t.gamma.domain()))
    throw ArgumentError("Gamma and the multipliers act on different spaces");
  LinearOperator gammaStar = buildAdjoint(t.gamma);
  LinearOperator gammaStarB = (t.b1 * gammaStar * t.b2).withTag(OperatorTag::GammaStar);
  LinearOperator gammaB = (t.b2.adjoint() * t.gamma * t.b1.adjoint()).withTag(OperatorTag::Gamma);
  LinearOperator piB = (t.gamma + gammaStarB).withTag(OperatorTag::PiB);
  LinearOperator piBStar = (gammaStar + gammaB).withTag(OperatorTag::PiB);
  return {t.gamma, std::move(gammaStar), t.b1, t.b2, std::move(gammaStarB), std::move(gammaB), std::move(piB),
          std::move(piBStar)};
}

MatrixField randomAccretiveField(const GridSpec& grid, int dim, double targetOmega, std::uint64_t seed) {
  grid.validate();
  if (dim < 1) throw ArgumentError("field dimension must be positive");
  if (!(targetOmega >= 0.0 && targetOmega < kPi / 2.0)) throw ArgumentError("target angle must lie in [0, pi/2)");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> angle(-targetOmega, targetOmega);
  // Shift keeps min Re <Bv, v> >= 0.1 + 0.05 cos(phi).
  const double shift = 0.1 / std::cos(targetOmega) + 0.05;
  const double scale = 1.0 / std::sqrt(2.0 * dim);
  MatrixField f = MatrixField::identity(grid, dim);
  for (Index p = 0; p < grid.points(); ++p) {
    Matrix w(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) w(i, j) = Complex(normal(rng), normal(rng)) * scale;
    const double phi = targetOmega > 0.0 ? angle(rng) : 0.0;
    f.at(p) = std::polar(1.0, phi) * (shift * Matrix::Identity(dim, dim) + w * w.adjoint());
  }
  return f;
}

MultiplierB randomAccretive(const GridSpec& grid, const FiberLayout& layout, double targetOmega, std::uint64_t seed) {
  MultiplierB b;
  b.b2 = randomAccretiveField(grid, layout.dim(), targetOmega, seed);
  b.b1 = b.b2.inverse();
  b.kappa1 = b.kappa2 = std::numeric_limits<double>::infinity();
  for (Index p = 0; p < grid.points(); ++p) {
    const auto r1 = linalg::numericalRange(b.b1.at(p), 16);
    const auto r2 = linalg::numericalRange(b.b2.at(p), 16);
    b.kappa1 = std::min(b.kappa1, r1.kappa);
    b.kappa2 = std::min(b.kappa2, r2.kappa);
    b.omega1 = std::max(b.omega1, r1.omega);
    b.omega2 = std::max(b.omega2, r2.omega);
  }
  return b;
}

namespace {

double cancellation(const SparseMatrix& g, const Space& codomain) {
  // Column sums over grid points, per output component.
  const Index points = codomain.grid.points();
  double worst = 0.0;
  for (Index col = 0; col < g.outerSize(); ++col) {
    std::vector<Complex> sums(static_cast<std::size_t>(codomain.fiber.dim()), 0.0);
    for (SparseMatrix::InnerIterator it(g, col); it; ++it) sums[static_cast<std::size_t>(it.row() / points)] += it.value();
    for (const auto& s : sums) worst = std::max(worst, std::abs(s));
  }
  return worst;
}

}  // namespace

HypothesisReport validateHypotheses(const Triple& t, int sampleCount, std::uint64_t seed) {
  HypothesisReport r;
  const Space& space = t.space();
  const SparseMatrix g = t.gamma.toSparse();
  const SparseMatrix gs = g.adjoint();
  const SparseMatrix b1 = t.b1.toSparse();
  const SparseMatrix b2 = t.b2.toSparse();

  r.gammaNorm = linalg::sparseNormEstimate(g);
  r.nilpotencyResidual = linalg::sparseNormEstimate(SparseMatrix(g * g));
  r.h3Residual1 = linalg::sparseNormEstimate(SparseMatrix(gs * b2 * b1 * gs));
  r.h3Residual2 = linalg::sparseNormEstimate(SparseMatrix(g * b1 * b2 * g));

  const Matrix gd(g);
  const Matrix gsd = gd.adjoint();
  const auto rangeGs = linalg::rangeBasis(gsd);
  const auto rangeG = linalg::rangeBasis(gd);
  r.rangeRankAmbiguous = rangeGs.rankAmbiguous || rangeG.rankAmbiguous;
  const Matrix b1d(b1), b2d(b2);
  const auto nr1 = linalg::numericalRange(rangeGs.basis.adjoint() * b1d * rangeGs.basis, sampleCount);
  const auto nr2 = linalg::numericalRange(rangeG.basis.adjoint() * b2d * rangeG.basis, sampleCount);
  r.kappa1 = nr1.kappa;
  r.kappa2 = nr2.kappa;
  r.omega1 = nr1.omega;
  r.omega2 = nr2.omega;
  r.omega = 0.5 * (r.omega1 + r.omega2);

  r.cancellationResidual = std::max(cancellation(g, space), cancellation(gs, space));

  const Matrix pi = gd + gsd;
  const Matrix grad(buildComponentGradient(space).sparse());
  const auto rangePi = linalg::rangeBasis(pi);
  if (rangePi.basis.cols() > 0) {
    const Matrix piY = pi * rangePi.basis;
    const Matrix gradY = grad * rangePi.basis;
    const auto ext = linalg::generalizedExtremes(piY.adjoint() * piY, gradY.adjoint() * gradY);
    r.coercivityConstant = std::sqrt(std::max(ext.low, 0.0));
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const GridSpec& grid = space.grid;
  const LinearOperator scalarGrad = buildGradient(grid);
  for (int sample = 0; sample < 20; ++sample) {
    Vector eta(grid.points());
    for (Index p = 0; p < eta.size(); ++p) eta(p) = normal(rng);
    Vector u(space.dim());
    for (Index i = 0; i < u.size(); ++i) u(i) = Complex(normal(rng), normal(rng));
    Vector etaU(space.dim());
    for (Index i = 0; i < u.size(); ++i) etaU(i) = eta(i % grid.points()) * u(i);
    const Vector gu = g * u;
    Vector commutator = g * etaU;
    for (Index i = 0; i < u.size(); ++i) commutator(i) -= eta(i % grid.points()) * gu(i);
    const Vector de = scalarGrad.apply(Vector(eta.cast<Complex>()));
    double gradMax = 0.0;
    for (Index p = 0; p < grid.points(); ++p) {
      double s = 0.0;
      for (int k = 0; k < grid.n; ++k) s += std::norm(de(k * grid.points() + p));
      gradMax = std::max(gradMax, std::sqrt(s));
    }
    if (gradMax > 0.0) r.localisationBound = std::max(r.localisationBound, commutator.norm() / (gradMax * u.norm()));
  }
  return r;
}

}  // namespace diracfc
