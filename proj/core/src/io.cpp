// SPDX-License-Identifier: Apache-2.0
#include "diracfc/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "diracfc/errors.hpp"

namespace diracfc::io {

std::string formatDouble(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void writeMatrixMarket(std::ostream& out, const SparseMatrix& m) {
  SparseMatrix c = m;
  c.makeCompressed();
  out << "%%MatrixMarket matrix coordinate complex general\n";
  out << c.rows() << ' ' << c.cols() << ' ' << c.nonZeros() << '\n';
  for (Index k = 0; k < c.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(c, k); it; ++it)
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << formatDouble(it.value().real()) << ' '
          << formatDouble(it.value().imag()) << '\n';
}

void writeMatrixMarket(std::ostream& out, const Matrix& m) {
  std::vector<Triplet> entries;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (m(i, j) != Complex(0.0)) entries.emplace_back(i, j, m(i, j));
  SparseMatrix s(m.rows(), m.cols());
  s.setFromTriplets(entries.begin(), entries.end());
  writeMatrixMarket(out, s);
}

void writeMatrixMarketFile(const std::string& path, const LinearOperator& op) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot open " + path + " for writing");
  if (op.isSparse())
    writeMatrixMarket(out, op.sparse());
  else
    writeMatrixMarket(out, op.denseStorage());
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool nextDataLine(std::istream& in, std::string& line, std::size_t& lineNo) {
  while (std::getline(in, line)) {
    ++lineNo;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    return true;
  }
  return false;
}

}  // namespace

SparseMatrix readMatrixMarket(std::istream& in) {
  std::string line;
  std::size_t lineNo = 0;
  if (!std::getline(in, line)) throw ParseError(1, "empty Matrix Market stream");
  ++lineNo;
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix") throw ParseError(lineNo, "missing %%MatrixMarket matrix banner");
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (format != "coordinate" && format != "array") throw ParseError(lineNo, "unsupported format '" + format + "'");
  if (field != "real" && field != "complex" && field != "integer") throw ParseError(lineNo, "unsupported field '" + field + "'");
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "hermitian" && symmetry != "skew-symmetric")
    throw ParseError(lineNo, "unsupported symmetry '" + symmetry + "'");
  const bool isComplex = field == "complex";

  if (!nextDataLine(in, line, lineNo)) throw ParseError(lineNo, "missing size line");
  std::istringstream sizes(line);
  long long rows = -1, cols = -1, nnz = -1;
  sizes >> rows >> cols;
  if (format == "coordinate") sizes >> nnz;
  if (sizes.fail() || rows < 0 || cols < 0 || (format == "coordinate" && nnz < 0))
    throw ParseError(lineNo, "malformed size line");

  auto readValue = [&](std::istringstream& ss) {
    double re = 0.0, im = 0.0;
    ss >> re;
    if (isComplex) ss >> im;
    if (ss.fail()) throw ParseError(lineNo, "malformed entry");
    return Complex(re, im);
  };

  std::vector<Triplet> entries;
  auto add = [&](long long i, long long j, Complex v) {
    entries.emplace_back(i, j, v);
    if (i == j) return;
    if (symmetry == "symmetric") entries.emplace_back(j, i, v);
    if (symmetry == "hermitian") entries.emplace_back(j, i, std::conj(v));
    if (symmetry == "skew-symmetric") entries.emplace_back(j, i, -v);
  };

  if (format == "coordinate") {
    for (long long e = 0; e < nnz; ++e) {
      if (!nextDataLine(in, line, lineNo)) throw ParseError(lineNo, "fewer entries than declared");
      std::istringstream ss(line);
      long long i = 0, j = 0;
      ss >> i >> j;
      if (ss.fail() || i < 1 || j < 1 || i > rows || j > cols) throw ParseError(lineNo, "entry index out of range");
      add(i - 1, j - 1, readValue(ss));
    }
  } else {
    const bool general = symmetry == "general";
    for (long long j = 0; j < cols; ++j)
      for (long long i = general ? 0 : (symmetry == "skew-symmetric" ? j + 1 : j); i < rows; ++i) {
        if (!nextDataLine(in, line, lineNo)) throw ParseError(lineNo, "fewer entries than declared");
        std::istringstream ss(line);
        const Complex v = readValue(ss);
        if (v != Complex(0.0)) add(i, j, v);
      }
  }
  if (nextDataLine(in, line, lineNo)) throw ParseError(lineNo, "trailing data after declared entries");
  SparseMatrix m(rows, cols);
  m.setFromTriplets(entries.begin(), entries.end());
  return m;
}

SparseMatrix readMatrixMarketFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open " + path);
  return readMatrixMarket(in);
}

void writeFieldCsv(std::ostream& out, const Field& field) {
  out << "grid_index,fiber_index,re,im\n";
  const Space& s = field.space;
  for (Index p = 0; p < s.grid.points(); ++p)
    for (int c = 0; c < s.fiber.dim(); ++c) {
      const Complex v = field.values(s.index(p, c));
      out << p << ',' << c << ',' << formatDouble(v.real()) << ',' << formatDouble(v.imag()) << '\n';
    }
}

namespace {

std::vector<std::string> splitCsv(const std::string& line) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream ss(line);
  while (std::getline(ss, item, ',')) parts.push_back(item);
  return parts;
}

double parseNumber(const std::string& s, std::size_t lineNo) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (s.find_first_not_of(" \t\r", used) != std::string::npos) throw ParseError(lineNo, "bad number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ParseError(lineNo, "bad number '" + s + "'");
  }
}

long long parseIndex(const std::string& s, std::size_t lineNo, long long limit) {
  const double v = parseNumber(s, lineNo);
  const auto i = static_cast<long long>(v);
  if (static_cast<double>(i) != v || i < 0 || i >= limit) throw ParseError(lineNo, "index '" + s + "' out of range");
  return i;
}

}  // namespace

Field readFieldCsv(std::istream& in, const Space& space) {
  Field f = Field::zeros(space);
  std::string line;
  std::size_t lineNo = 0;
  if (!std::getline(in, line)) throw ParseError(1, "empty CSV");
  ++lineNo;
  if (line.rfind("grid_index", 0) != 0) throw ParseError(lineNo, "expected header grid_index,fiber_index,re,im");
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto parts = splitCsv(line);
    if (parts.size() != 4) throw ParseError(lineNo, "expected 4 columns");
    const auto p = parseIndex(parts[0], lineNo, space.grid.points());
    const auto c = parseIndex(parts[1], lineNo, space.fiber.dim());
    f.values(space.index(p, static_cast<int>(c))) = Complex(parseNumber(parts[2], lineNo), parseNumber(parts[3], lineNo));
  }
  return f;
}

void writeMatrixFieldCsv(std::ostream& out, const MatrixField& field) {
  out << "grid_index,row,col,re,im\n";
  for (Index p = 0; p < field.grid.points(); ++p)
    for (int i = 0; i < field.dim; ++i)
      for (int j = 0; j < field.dim; ++j) {
        const Complex v = field.at(p)(i, j);
        out << p << ',' << i << ',' << j << ',' << formatDouble(v.real()) << ',' << formatDouble(v.imag()) << '\n';
      }
}

MatrixField readMatrixFieldCsv(std::istream& in, const GridSpec& grid, int dim) {
  MatrixField f = MatrixField::constant(grid, Matrix::Zero(dim, dim));
  std::string line;
  std::size_t lineNo = 0;
  if (!std::getline(in, line)) throw ParseError(1, "empty CSV");
  ++lineNo;
  if (line.rfind("grid_index", 0) != 0) throw ParseError(lineNo, "expected header grid_index,row,col,re,im");
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto parts = splitCsv(line);
    if (parts.size() != 5) throw ParseError(lineNo, "expected 5 columns");
    const auto p = parseIndex(parts[0], lineNo, grid.points());
    const auto i = parseIndex(parts[1], lineNo, dim);
    const auto j = parseIndex(parts[2], lineNo, dim);
    f.at(p)(i, j) = Complex(parseNumber(parts[3], lineNo), parseNumber(parts[4], lineNo));
  }
  return f;
}

}  // namespace diracfc::io
