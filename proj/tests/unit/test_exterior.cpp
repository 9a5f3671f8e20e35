// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "diracfc/errors.hpp"
#include "diracfc/exterior.hpp"
#include "testing.hpp"

using namespace diracfc;

TEST_CASE("insertion sign counts smaller axes") {
  CHECK(insertionSign(1, 0b0, 2) == 1);
  CHECK(insertionSign(2, 0b1, 2) == -1);
  CHECK_FALSE(insertionSign(1, 0b1, 2).has_value());
  CHECK(insertionSign(1, 0b110, 3) == 1);
  CHECK(insertionSign(3, 0b011, 3) == 1);
  CHECK(insertionSign(2, 0b101, 3) == -1);
  CHECK_THROWS_AS(insertionSign(3, 0, 2), ArgumentError);
  CHECK_THROWS_AS(insertionSign(1, 0b100, 2), ArgumentError);
}

TEST_CASE("inserting two axes in either order differs by a sign") {
  for (int n = 1; n <= kMaxDimension; ++n)
    for (MultiIndex s = 0; s < (1u << n); ++s)
      for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= n; ++k) {
          if (j == k || contains(s, j) || contains(s, k)) continue;
          const int a = *insertionSign(j, s, n) * *insertionSign(k, withAxis(s, j), n);
          const int b = *insertionSign(k, s, n) * *insertionSign(j, withAxis(s, k), n);
          CHECK(a == -b);
        }
}

TEST_CASE("form layout enumerates masks in increasing order") {
  const auto f = FiberLayout::forms(3);
  REQUIRE(f.dim() == 8);
  for (int c = 0; c < 8; ++c) {
    CHECK(f.mask(c) == static_cast<MultiIndex>(c));
    CHECK(f.component(f.mask(c)) == c);
  }
  CHECK(f.componentsOfDegree(0) == std::vector<int>{0});
  CHECK(f.componentsOfDegree(1) == std::vector<int>{1, 2, 4});
  CHECK(f.componentsOfDegree(2) == std::vector<int>{3, 5, 6});
  CHECK(f.componentsOfDegree(3) == std::vector<int>{7});
  CHECK_FALSE(FiberLayout::plain(3).isForms());
  CHECK(degree(0b101) == 2);
}

TEST_CASE("gram on forms for simple metrics") {
  const auto id = gramOnForms(Matrix::Identity(3, 3));
  for (const auto& b : id.blocks) CHECK((b - Matrix::Identity(b.rows(), b.cols())).norm() == 0.0);

  const auto one = gramOnForms(Matrix::Constant(1, 1, 4.0));
  CHECK(one.blocks[0](0, 0) == Complex(1.0));
  CHECK(one.blocks[1](0, 0) == Complex(4.0));

  Matrix g = Matrix::Zero(2, 2);
  g(0, 0) = 2.0;
  g(1, 1) = 3.0;
  const auto two = gramOnForms(g);
  // det of the full 2x2 minor, computed by hand
  CHECK(std::abs(two.blocks[2](0, 0) - Complex(g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0))) < 1e-14);
  CHECK(std::abs(two.blocks[2](0, 0) - 6.0) < 1e-14);
}

TEST_CASE("gram entries are minors of the metric") {
  testing::Gen gen(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = gen.integer(1, 3);
    const Matrix w = gen.matrix(n, n);
    const Matrix g = w * w.adjoint() + 0.5 * Matrix::Identity(n, n);
    const auto gram = gramOnForms(g);
    const Matrix full = gram.full();
    const auto layout = FiberLayout::forms(n);
    // brute-force determinant of G[S, T]
    for (int a = 0; a < layout.dim(); ++a)
      for (int b = 0; b < layout.dim(); ++b) {
        const MultiIndex s = layout.mask(a), t = layout.mask(b);
        if (degree(s) != degree(t)) {
          CHECK(std::abs(full(a, b)) == 0.0);
          continue;
        }
        std::vector<int> rs, cs;
        for (int k = 1; k <= n; ++k) {
          if (contains(s, k)) rs.push_back(k - 1);
          if (contains(t, k)) cs.push_back(k - 1);
        }
        Matrix minor(static_cast<Index>(rs.size()), static_cast<Index>(cs.size()));
        for (std::size_t i = 0; i < rs.size(); ++i)
          for (std::size_t j = 0; j < cs.size(); ++j) minor(static_cast<Index>(i), static_cast<Index>(j)) = g(rs[i], cs[j]);
        const Complex expected = rs.empty() ? Complex(1.0) : minor.determinant();
        CHECK(std::abs(full(a, b) - expected) < 1e-12 * (1.0 + std::abs(expected)));
      }
    // blocks of a positive definite metric stay positive definite
    Eigen::SelfAdjointEigenSolver<Matrix> es(full);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("gram is multiplicative on diagonal metrics") {
  testing::Gen gen(5);
  const int n = 3;
  Matrix g = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) g(k, k) = gen.uniform(0.5, 3.0);
  const Matrix full = gramOnForms(g).full();
  const auto layout = FiberLayout::forms(n);
  for (int c = 0; c < layout.dim(); ++c) {
    Complex prod = 1.0;
    for (int k = 1; k <= n; ++k)
      if (contains(layout.mask(c), k)) prod *= g(k - 1, k - 1);
    CHECK(std::abs(full(c, c) - prod) < 1e-14 * std::abs(prod));
  }
}

TEST_CASE("gram rejects bad metrics") {
  Matrix g = Matrix::Identity(2, 2);
  g(0, 1) = 1.0;
  CHECK_THROWS_AS(gramOnForms(g), ArgumentError);
  CHECK_THROWS_AS(gramOnForms(-Matrix::Identity(2, 2)), ArgumentError);
  CHECK_THROWS_AS(gramOnForms(Matrix::Identity(4, 4)), ArgumentError);
}
