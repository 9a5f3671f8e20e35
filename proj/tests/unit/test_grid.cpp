// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "diracfc/errors.hpp"
#include "diracfc/grid.hpp"
#include "diracfc/linear_operator.hpp"
#include "diracfc/parallel.hpp"
#include "testing.hpp"

using namespace diracfc;

TEST_CASE("grid geometry") {
  const GridSpec g{2, 4, 2.0};
  CHECK(g.points() == 16);
  CHECK(g.spacing() == doctest::Approx(0.5));
  CHECK(g.cellVolume() == doctest::Approx(0.25));
  CHECK(g.levels() == 2);
  for (Index p = 0; p < g.points(); ++p) CHECK(g.point(g.coords(p)) == p);
  const Index p = g.point({3, 1, 0});
  CHECK(g.coords(g.shifted(p, 1, 1))[0] == 0);
  CHECK(g.coords(g.shifted(p, 2, -2))[1] == 3);
  CHECK_THROWS_AS((GridSpec{4, 4, 1.0}.validate()), ArgumentError);
  CHECK_THROWS_AS((GridSpec{1, 1, 1.0}.validate()), ArgumentError);
  CHECK_THROWS_AS((GridSpec{1, 6, 1.0}.levels()), ArgumentError);
}

TEST_CASE("component-major indexing") {
  const Space s{GridSpec{1, 4, 1.0}, FiberLayout::forms(1)};
  CHECK(s.dim() == 8);
  CHECK(s.index(3, 0) == 3);
  CHECK(s.index(0, 1) == 4);
}

TEST_CASE("matrix field algebra") {
  testing::Gen gen(3);
  const GridSpec g{1, 4, 1.0};
  MatrixField f = MatrixField::identity(g, 2);
  for (auto& m : f.values) m = gen.matrix(2, 2) + 3.0 * Matrix::Identity(2, 2);
  const MatrixField inv = f.inverse();
  for (Index p = 0; p < g.points(); ++p) CHECK((f.at(p) * inv.at(p) - Matrix::Identity(2, 2)).norm() < 1e-13);
  const MatrixField d = (f + f.adjoint()) - f.adjoint();
  for (Index p = 0; p < g.points(); ++p) CHECK((d.at(p) - f.at(p)).norm() < 1e-13);
  CHECK(f.scaled(2.0).supNorm() == doctest::Approx(2.0 * f.supNorm()));
  CHECK_THROWS_AS(MatrixField::constant(g, Matrix::Zero(2, 2)).inverse(), NumericalError);
}

TEST_CASE("linear operator storage and algebra") {
  testing::Gen gen(4);
  const Space s{GridSpec{1, 4, 1.0}, FiberLayout::plain(1)};
  const Matrix a = gen.matrix(4, 4), b = gen.matrix(4, 4);
  const LinearOperator A(s, s, a), B(s, s, SparseMatrix(b.sparseView()));
  CHECK((A * B).dense().isApprox(a * b, 1e-14));
  CHECK((A + B).dense().isApprox(a + b, 1e-14));
  CHECK((A - B).dense().isApprox(a - b, 1e-14));
  CHECK(A.adjoint().dense().isApprox(a.adjoint(), 1e-14));
  CHECK(B.scaled(kI).dense().isApprox(kI * b, 1e-14));
  const Vector u = gen.vector(4);
  CHECK((B.apply(u) - b * u).norm() < 1e-13);
  CHECK(LinearOperator::identity(s).apply(u) == u);
  CHECK(LinearOperator::zero(s, s).toSparse().nonZeros() == 0);
  CHECK_THROWS(A.sparse());
  CHECK((LinearOperator(s, s, SparseMatrix(4, 4), OperatorTag::Gamma).adjoint().tag() == OperatorTag::GammaStar));
}

TEST_CASE("ordered sums do not depend on the thread count") {
  auto term = [](Index i) { return 1.0 / (1.0 + static_cast<double>(i) * 0.37); };
  setThreadCount(1);
  const double one = orderedSum(1000, 0.0, term);
  setThreadCount(4);
  const double four = orderedSum(1000, 0.0, term);
  setThreadCount(1);
  CHECK(one == four);
}

TEST_CASE("parallelFor propagates exceptions") {
  setThreadCount(3);
  CHECK_THROWS_AS(parallelFor(10, [](Index i) {
                    if (i == 7) throw ArgumentError("boom");
                  }),
                  ArgumentError);
  setThreadCount(1);
}
