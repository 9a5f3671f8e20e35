// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <variant>

#include "diracfc/grid.hpp"
#include "diracfc/types.hpp"

namespace diracfc {

enum class OperatorTag { Gamma, GammaStar, PiB, Multiplier, Generic };

std::string toString(OperatorTag tag);

// Operator between two gridded spaces, stored sparse or dense.
class LinearOperator {
 public:
  LinearOperator(Space domain, Space codomain, SparseMatrix matrix, OperatorTag tag = OperatorTag::Generic);
  LinearOperator(Space domain, Space codomain, Matrix matrix, OperatorTag tag = OperatorTag::Generic);

  const Space& domain() const { return domain_; }
  const Space& codomain() const { return codomain_; }
  OperatorTag tag() const { return tag_; }
  LinearOperator withTag(OperatorTag tag) const;

  Index rows() const { return codomain_.dim(); }
  Index cols() const { return domain_.dim(); }
  bool isSparse() const { return std::holds_alternative<SparseMatrix>(storage_); }

  const SparseMatrix& sparse() const;  // throws unless stored sparse
  const Matrix& denseStorage() const;  // throws unless stored dense
  Matrix dense() const;
  SparseMatrix toSparse() const;

  Vector apply(const Vector& u) const;
  Field apply(const Field& u) const;

  LinearOperator adjoint() const;
  LinearOperator operator*(const LinearOperator& rhs) const;
  LinearOperator operator+(const LinearOperator& rhs) const;
  LinearOperator operator-(const LinearOperator& rhs) const;
  LinearOperator scaled(Complex s) const;

  static LinearOperator identity(const Space& space);
  static LinearOperator zero(const Space& domain, const Space& codomain);

 private:
  Space domain_;
  Space codomain_;
  std::variant<SparseMatrix, Matrix> storage_;
  OperatorTag tag_;
};

}  // namespace diracfc
