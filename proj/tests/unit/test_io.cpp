// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <sstream>

#include "diracfc/errors.hpp"
#include "diracfc/gridops.hpp"
#include "diracfc/io.hpp"
#include "testing.hpp"

using namespace diracfc;

namespace {

SparseMatrix roundTrip(const SparseMatrix& m) {
  std::stringstream ss;
  io::writeMatrixMarket(ss, m);
  return io::readMatrixMarket(ss);
}

}  // namespace

TEST_CASE("Matrix Market round trip is bit exact") {
  const GridSpec grid{1, 4, 1.0};
  const SparseMatrix g = buildGamma(grid).toSparse();
  CHECK(g.rows() == 8);
  for (Index k = 0; k < g.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(g, k); it; ++it) CHECK(std::abs(it.value()) == 4.0);
  CHECK((roundTrip(g) - g).norm() == 0.0);

  const auto sys = testing::randomSystem(GridSpec{2, 4, 1.0}, 0.7, 9);
  const Matrix pi = sys.piB.dense();
  std::stringstream ss;
  io::writeMatrixMarket(ss, pi);
  const Matrix back = io::readMatrixMarket(ss);
  CHECK((back - pi).cwiseAbs().maxCoeff() == 0.0);

  testing::Gen gen(1);
  for (int i = 0; i < 200; ++i) {
    const double x = gen.normal() * std::pow(10.0, gen.integer(-300, 300));
    CHECK(std::stod(io::formatDouble(x)) == x);
  }
}

TEST_CASE("empty matrix is a valid file") {
  const SparseMatrix z(0, 0);
  std::stringstream ss;
  io::writeMatrixMarket(ss, z);
  CHECK(ss.str().find("0 0 0") != std::string::npos);
  const SparseMatrix back = io::readMatrixMarket(ss);
  CHECK(back.rows() == 0);
  CHECK(roundTrip(SparseMatrix(3, 5)).cols() == 5);
}

TEST_CASE("Matrix Market variants") {
  std::istringstream sym("%%MatrixMarket matrix coordinate real symmetric\n% comment\n2 2 2\n1 1 3\n2 1 -1\n");
  const Matrix a = io::readMatrixMarket(sym);
  CHECK(a(0, 1) == Complex(-1.0));
  CHECK(a(1, 0) == Complex(-1.0));
  std::istringstream herm("%%MatrixMarket matrix coordinate complex hermitian\n2 2 1\n2 1 1 2\n");
  const Matrix h = io::readMatrixMarket(herm);
  CHECK(h(1, 0) == Complex(1.0, 2.0));
  CHECK(h(0, 1) == Complex(1.0, -2.0));
  std::istringstream arr("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n");
  const Matrix d = io::readMatrixMarket(arr);
  CHECK(d(1, 0) == Complex(2.0));
  CHECK(d(0, 1) == Complex(3.0));
}

TEST_CASE("malformed Matrix Market reports the line") {
  auto lineOf = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      io::readMatrixMarket(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(lineOf("") == 1);
  CHECK(lineOf("%%MatrixMarket matrix coordinate pattern general\n") == 1);
  CHECK(lineOf("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n") == 3);
  CHECK(lineOf("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n") == 3);
  CHECK(lineOf("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 x\n") == 3);
  CHECK(lineOf("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 1\n2 2 2\n") == 4);
}

TEST_CASE("field CSV round trips") {
  testing::Gen gen(2);
  const Space s{GridSpec{2, 4, 1.0}, FiberLayout::forms(2)};
  const Field f{s, gen.vector(s.dim())};
  std::stringstream ss;
  io::writeFieldCsv(ss, f);
  const Field back = io::readFieldCsv(ss, s);
  CHECK((back.values - f.values).norm() == 0.0);

  MatrixField m = MatrixField::identity(s.grid, 3);
  for (auto& v : m.values) v = gen.matrix(3, 3);
  std::stringstream ms;
  io::writeMatrixFieldCsv(ms, m);
  const MatrixField mb = io::readMatrixFieldCsv(ms, s.grid, 3);
  for (Index p = 0; p < s.grid.points(); ++p) CHECK((mb.at(p) - m.at(p)).norm() == 0.0);

  std::istringstream bad("grid_index,fiber_index,re,im\n0,0,1\n");
  CHECK_THROWS_AS(io::readFieldCsv(bad, s), ParseError);
}
