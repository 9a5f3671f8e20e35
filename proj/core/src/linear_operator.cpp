// SPDX-License-Identifier: Apache-2.0
#include "diracfc/linear_operator.hpp"

#include "diracfc/errors.hpp"

namespace diracfc {

std::string toString(OperatorTag tag) {
  switch (tag) {
    case OperatorTag::Gamma: return "Gamma";
    case OperatorTag::GammaStar: return "GammaStar";
    case OperatorTag::PiB: return "PiB";
    case OperatorTag::Multiplier: return "Multiplier";
    case OperatorTag::Generic: return "Generic";
  }
  return "Generic";
}

LinearOperator::LinearOperator(Space domain, Space codomain, SparseMatrix matrix, OperatorTag tag)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), storage_(std::move(matrix)), tag_(tag) {
  const auto& m = std::get<SparseMatrix>(storage_);
  if (m.rows() != codomain_.dim() || m.cols() != domain_.dim())
    throw ArgumentError("operator matrix does not match its spaces");
  std::get<SparseMatrix>(storage_).makeCompressed();
}

LinearOperator::LinearOperator(Space domain, Space codomain, Matrix matrix, OperatorTag tag)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), storage_(std::move(matrix)), tag_(tag) {
  const auto& m = std::get<Matrix>(storage_);
  if (m.rows() != codomain_.dim() || m.cols() != domain_.dim())
    throw ArgumentError("operator matrix does not match its spaces");
}

LinearOperator LinearOperator::withTag(OperatorTag tag) const {
  LinearOperator out = *this;
  out.tag_ = tag;
  return out;
}

const SparseMatrix& LinearOperator::sparse() const {
  if (!isSparse()) throw ArgumentError("operator is stored dense");
  return std::get<SparseMatrix>(storage_);
}

const Matrix& LinearOperator::denseStorage() const {
  if (isSparse()) throw ArgumentError("operator is stored sparse");
  return std::get<Matrix>(storage_);
}

Matrix LinearOperator::dense() const {
  if (isSparse()) return Matrix(std::get<SparseMatrix>(storage_));
  return std::get<Matrix>(storage_);
}

SparseMatrix LinearOperator::toSparse() const {
  if (isSparse()) return std::get<SparseMatrix>(storage_);
  return std::get<Matrix>(storage_).sparseView();
}

Vector LinearOperator::apply(const Vector& u) const {
  if (u.size() != cols()) throw ArgumentError("vector size does not match operator domain");
  if (isSparse()) return std::get<SparseMatrix>(storage_) * u;
  return std::get<Matrix>(storage_) * u;
}

Field LinearOperator::apply(const Field& u) const {
  if (!(u.space == domain_)) throw ArgumentError("field does not live on the operator domain");
  return {codomain_, apply(u.values)};
}

LinearOperator LinearOperator::adjoint() const {
  const OperatorTag tag = tag_ == OperatorTag::Gamma     ? OperatorTag::GammaStar
                          : tag_ == OperatorTag::GammaStar ? OperatorTag::Gamma
                                                           : tag_;
  if (isSparse()) return {codomain_, domain_, SparseMatrix(std::get<SparseMatrix>(storage_).adjoint()), tag};
  return {codomain_, domain_, Matrix(std::get<Matrix>(storage_).adjoint()), tag};
}

LinearOperator LinearOperator::operator*(const LinearOperator& rhs) const {
  if (!(rhs.codomain_ == domain_)) throw ArgumentError("operator composition with mismatched spaces");
  if (isSparse() && rhs.isSparse())
    return {rhs.domain_, codomain_, SparseMatrix(sparse() * rhs.sparse()), OperatorTag::Generic};
  if (isSparse()) return {rhs.domain_, codomain_, Matrix(sparse() * rhs.denseStorage()), OperatorTag::Generic};
  if (rhs.isSparse()) return {rhs.domain_, codomain_, Matrix(denseStorage() * rhs.sparse()), OperatorTag::Generic};
  return {rhs.domain_, codomain_, Matrix(denseStorage() * rhs.denseStorage()), OperatorTag::Generic};
}

LinearOperator LinearOperator::operator+(const LinearOperator& rhs) const {
  if (!(rhs.domain_ == domain_) || !(rhs.codomain_ == codomain_))
    throw ArgumentError("operator sum with mismatched spaces");
  if (isSparse() && rhs.isSparse())
    return {domain_, codomain_, SparseMatrix(sparse() + rhs.sparse()), OperatorTag::Generic};
  return {domain_, codomain_, Matrix(dense() + rhs.dense()), OperatorTag::Generic};
}

LinearOperator LinearOperator::operator-(const LinearOperator& rhs) const { return *this + rhs.scaled(-1.0); }

LinearOperator LinearOperator::scaled(Complex s) const {
  if (isSparse()) return {domain_, codomain_, SparseMatrix(s * sparse()), tag_};
  return {domain_, codomain_, Matrix(s * denseStorage()), tag_};
}

LinearOperator LinearOperator::identity(const Space& space) {
  SparseMatrix id(space.dim(), space.dim());
  id.setIdentity();
  return {space, space, std::move(id), OperatorTag::Multiplier};
}

LinearOperator LinearOperator::zero(const Space& domain, const Space& codomain) {
  return {domain, codomain, SparseMatrix(codomain.dim(), domain.dim()), OperatorTag::Generic};
}

}  // namespace diracfc
