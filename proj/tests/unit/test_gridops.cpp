// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "diracfc/errors.hpp"
#include "diracfc/gridops.hpp"
#include "testing.hpp"

using namespace diracfc;
using testing::opNorm;

TEST_CASE("gamma kills constants and acts on Fourier modes by its symbol") {
  const GridSpec g{1, 4, 4.0};  // h = 1
  const LinearOperator gamma = buildGamma(g);
  Vector u = Vector::Zero(8);
  u.head(4).setOnes();
  CHECK(gamma.apply(u).norm() == 0.0);

  Vector mode = Vector::Zero(8);
  for (int j = 0; j < 4; ++j) mode(j) = std::polar(1.0, 2.0 * kPi * j / 4.0);
  const Vector du = gamma.apply(mode);
  const Complex symbol = std::polar(1.0, kPi / 2.0) - 1.0;
  for (int j = 0; j < 4; ++j) {
    CHECK(std::abs(du(4 + j) - symbol * mode(j)) < 1e-14);
    CHECK(du(j) == Complex(0.0));
  }
}

TEST_CASE("gamma squares to zero exactly") {
  for (const GridSpec& g : {GridSpec{1, 16, 1.0}, GridSpec{2, 2, 1.0}, GridSpec{2, 8, 1.0}, GridSpec{3, 4, 1.0}}) {
    const SparseMatrix s = buildGamma(g).toSparse();
    const SparseMatrix sq = s * s;
    double worst = 0.0;
    for (Index k = 0; k < sq.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(sq, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    CHECK(worst == 0.0);
  }
}

TEST_CASE("adjoint is a backward difference and satisfies the adjoint identity") {
  const GridSpec g{1, 4, 1.0};
  const Matrix gs = buildAdjoint(buildGamma(g)).dense();
  // (Gamma^* v)_0(j) = (v_1(j-1) - v_1(j)) / h
  for (int j = 0; j < 4; ++j) {
    CHECK(gs(j, 4 + j) == Complex(-4.0));
    CHECK(gs(j, 4 + (j + 3) % 4) == Complex(4.0));
  }

  testing::Gen gen(7);
  const GridSpec g3{3, 4, 1.0};
  const LinearOperator gamma = buildGamma(g3);
  const LinearOperator adj = buildAdjoint(gamma);
  for (int i = 0; i < 100; ++i) {
    const Vector u = gen.vector(gamma.cols()), v = gen.vector(gamma.rows());
    const Complex lhs = v.dot(gamma.apply(u)), rhs = adj.apply(v).dot(u);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs) + 1e-12);
  }
  const Space s{g, FiberLayout::plain(1)};
  Matrix d = Matrix::Zero(4, 4);
  d.diagonal() << 1.0, 2.0, 3.0, 4.0;
  CHECK(buildAdjoint(LinearOperator(s, s, d)).dense() == d);
}

TEST_CASE("pi_B on n=1 matches hand assembly") {
  const GridSpec g{1, 4, 1.0};
  testing::Gen gen(12);
  MatrixField b1 = MatrixField::identity(g, 2), b2 = b1;
  Matrix B1 = Matrix::Zero(8, 8), B2 = Matrix::Zero(8, 8);
  for (Index p = 0; p < 4; ++p)
    for (int c = 0; c < 2; ++c) {
      const Complex x(gen.uniform(1, 2), gen.uniform(-1, 1)), y(gen.uniform(1, 2), gen.uniform(-1, 1));
      b1.at(p)(c, c) = x;
      b2.at(p)(c, c) = y;
      B1(c * 4 + p, c * 4 + p) = x;
      B2(c * 4 + p, c * 4 + p) = y;
    }
  Matrix G = Matrix::Zero(8, 8);
  for (int j = 0; j < 4; ++j) {
    G(4 + j, j) = -4.0;
    G(4 + j, (j + 1) % 4) = 4.0;
  }
  const PiBSystem sys = buildPiB(formsTriple(g, b1, b2));
  CHECK((sys.piB.dense() - (G + B1 * G.adjoint() * B2)).norm() < 1e-13);
  CHECK((sys.piBStar.dense() - sys.piB.dense().adjoint()).norm() < 1e-13);
}

TEST_CASE("flat pi is Hermitian") {
  const PiBSystem sys = buildPiB(flatFormsTriple(GridSpec{2, 4, 1.0}));
  const Matrix pi = sys.piB.dense();
  CHECK(opNorm(pi - pi.adjoint()) <= 1e-12);
}

TEST_CASE("block triple squares to the divergence form operator") {
  const GridSpec g{1, 8, 1.0};
  const double h = g.spacing();
  testing::Gen gen(3);
  MatrixField a = MatrixField::identity(g, 1);
  for (auto& v : a.values) v(0, 0) = Complex(gen.uniform(0.5, 2.0), gen.uniform(-0.3, 0.3));
  const PiBSystem sys = buildPiB(buildBlockTriple(buildGradient(g), MatrixField::identity(g, 1), a));
  const Matrix pi = sys.piB.dense();
  const Matrix top = (pi * pi).topLeftCorner(8, 8);
  // -(d/dx) a (d/dx) with forward differences, assembled by stencil
  Matrix expected = Matrix::Zero(8, 8);
  for (int j = 0; j < 8; ++j) {
    const int jm = (j + 7) % 8, jp = (j + 1) % 8;
    const Complex ar = a.at(j)(0, 0), al = a.at(jm)(0, 0);
    expected(j, j) += (ar + al) / (h * h);
    expected(j, jp) -= ar / (h * h);
    expected(j, jm) -= al / (h * h);
  }
  CHECK((top - expected).norm() < 1e-10 * expected.norm());

  const PiBSystem zero = buildPiB(buildBlockTriple(buildGradient(g), MatrixField::constant(g, Matrix::Zero(1, 1)), a));
  CHECK(zero.b1.toSparse().norm() == 0.0);
  CHECK((zero.piB.dense() - zero.gamma.dense()).norm() == 0.0);
}

TEST_CASE("central derivative is skew adjoint") {
  const Matrix d = buildCentralDerivative(GridSpec{1, 8, 1.0}).dense();
  CHECK((d + d.adjoint()).norm() == 0.0);
  CHECK_THROWS_AS(buildCentralDerivative(GridSpec{2, 4, 1.0}), ArgumentError);
}

TEST_CASE("random accretive multipliers") {
  const GridSpec g{2, 4, 1.0};
  const auto layout = FiberLayout::forms(2);
  const auto hermitian = randomAccretive(g, layout, 0.0, 4);
  for (const auto& m : hermitian.b2.values) {
    CHECK((m - m.adjoint()).norm() < 1e-14);
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }
  const auto a = randomAccretive(g, layout, 0.8, 21), b = randomAccretive(g, layout, 0.8, 21);
  for (Index p = 0; p < g.points(); ++p) CHECK(a.b2.at(p) == b.b2.at(p));
  CHECK(a.kappa2 >= 0.1);
  CHECK(a.kappa1 > 0.0);
  CHECK(a.omega2 <= 0.8 + 1e-6);
  CHECK_THROWS_AS(randomAccretiveField(g, 4, kPi / 2.0, 1), ArgumentError);
}

TEST_CASE("hypotheses on the flat torus") {
  const auto r = validateHypotheses(flatFormsTriple(GridSpec{2, 4, 1.0}));
  CHECK(r.nilpotencyResidual == 0.0);
  CHECK(r.h3Residual1 < 1e-12);
  CHECK(r.cancellationResidual == 0.0);
  CHECK(r.coercivityConstant == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.kappa1 == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(r.omega < 1e-8);
  CHECK(r.localisationBound <= 2.0);
}

TEST_CASE("inverse pair multipliers satisfy the cancellation hypothesis") {
  testing::Gen gen(8);
  for (int trial = 0; trial < 4; ++trial) {
    const GridSpec g{gen.integer(1, 2), 4, 1.0};
    const double omega = gen.uniform(0.0, 1.2);
    const auto b = randomAccretive(g, FiberLayout::forms(g.n), omega, gen.seed());
    const auto r = validateHypotheses(formsTriple(g, b.b1, b.b2), 32);
    const double scale = r.gammaNorm * r.gammaNorm;
    CHECK(r.h3Residual1 <= 1e-10 * scale);
    CHECK(r.h3Residual2 <= 1e-10 * scale);
    CHECK(r.accretive());
    CHECK(r.localisationBound <= 2.0);
  }
}

TEST_CASE("ranges of gamma and its adjoint are orthogonal") {
  const Matrix g = buildGamma(GridSpec{2, 4, 1.0}).dense();
  const Matrix r1 = linalg::rangeBasis(g).basis, r2 = linalg::rangeBasis(g.adjoint()).basis;
  CHECK((r1.adjoint() * r2).cwiseAbs().maxCoeff() <= 1e-12);
}
