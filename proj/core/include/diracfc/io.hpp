// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>

#include "diracfc/grid.hpp"
#include "diracfc/linear_operator.hpp"

namespace diracfc::io {

// 17 significant digits; round-trips doubles exactly.
std::string formatDouble(double value);

// Coordinate complex general. Explicitly stored entries are written even if zero.
void writeMatrixMarket(std::ostream& out, const SparseMatrix& m);
void writeMatrixMarket(std::ostream& out, const Matrix& m);
void writeMatrixMarketFile(const std::string& path, const LinearOperator& op);

// Accepts coordinate or array storage, real or complex, general/symmetric/hermitian/skew-symmetric.
SparseMatrix readMatrixMarket(std::istream& in);
SparseMatrix readMatrixMarketFile(const std::string& path);

// Columns: grid_index,fiber_index,re,im
void writeFieldCsv(std::ostream& out, const Field& field);
Field readFieldCsv(std::istream& in, const Space& space);

// Columns: grid_index,row,col,re,im. Missing entries are zero.
void writeMatrixFieldCsv(std::ostream& out, const MatrixField& field);
MatrixField readMatrixFieldCsv(std::istream& in, const GridSpec& grid, int dim);

}  // namespace diracfc::io
