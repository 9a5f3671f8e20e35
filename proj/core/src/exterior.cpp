// SPDX-License-Identifier: Apache-2.0
#include "diracfc/exterior.hpp"

#include <bit>
#include <string>

#include "diracfc/errors.hpp"

namespace diracfc {

int degree(MultiIndex s) { return std::popcount(s); }

bool contains(MultiIndex s, int axis) { return (s >> (axis - 1)) & 1u; }

MultiIndex withAxis(MultiIndex s, int axis) { return s | (MultiIndex{1} << (axis - 1)); }

std::optional<int> insertionSign(int axis, MultiIndex s, int n) {
  if (n < 1 || n > kMaxDimension) throw ArgumentError("dimension must be in 1..3");
  if (axis < 1 || axis > n) throw ArgumentError("axis " + std::to_string(axis) + " out of range");
  if (s >> n) throw ArgumentError("multi-index has axes beyond the dimension");
  if (contains(s, axis)) return std::nullopt;
  const MultiIndex below = s & ((MultiIndex{1} << (axis - 1)) - 1);
  return std::popcount(below) % 2 == 0 ? 1 : -1;
}

FiberLayout FiberLayout::forms(int n) {
  if (n < 1 || n > kMaxDimension) throw ArgumentError("dimension must be in 1..3");
  FiberLayout layout;
  layout.n_ = n;
  layout.dim_ = 1 << n;
  for (MultiIndex s = 0; s < (MultiIndex{1} << n); ++s) layout.masks_.push_back(s);
  return layout;
}

FiberLayout FiberLayout::plain(int dim) {
  if (dim < 1) throw ArgumentError("fiber dimension must be positive");
  FiberLayout layout;
  layout.dim_ = dim;
  return layout;
}

int FiberLayout::component(MultiIndex s) const {
  if (!isForms()) throw ArgumentError("plain fiber has no multi-index components");
  if (s >> n_) throw ArgumentError("multi-index out of range");
  return static_cast<int>(s);
}

std::vector<int> FiberLayout::componentsOfDegree(int k) const {
  std::vector<int> out;
  for (int c = 0; c < dim_; ++c)
    if (isForms() && degree(masks_[static_cast<std::size_t>(c)]) == k) out.push_back(c);
  return out;
}

namespace {

std::vector<MultiIndex> masksOfDegree(int n, int k) {
  std::vector<MultiIndex> out;
  for (MultiIndex s = 0; s < (MultiIndex{1} << n); ++s)
    if (degree(s) == k) out.push_back(s);
  return out;
}

Complex minor(const Matrix& g, MultiIndex rows, MultiIndex cols, int n) {
  std::vector<Index> r, c;
  for (int a = 1; a <= n; ++a) {
    if (contains(rows, a)) r.push_back(a - 1);
    if (contains(cols, a)) c.push_back(a - 1);
  }
  if (r.empty()) return 1.0;
  Matrix sub(static_cast<Index>(r.size()), static_cast<Index>(c.size()));
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j)
      sub(static_cast<Index>(i), static_cast<Index>(j)) = g(r[i], c[j]);
  return sub.determinant();
}

}  // namespace

FormGram gramOnForms(const Matrix& g) {
  const Index n = g.rows();
  if (n < 1 || n > kMaxDimension || g.cols() != n) throw ArgumentError("metric must be n x n with n in 1..3");
  const double scale = g.cwiseAbs().maxCoeff();
  if ((g - g.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1.0))
    throw ArgumentError("metric is not Hermitian");
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success || (llt.matrixL().toDenseMatrix().diagonal().real().minCoeff() <= 1e-12 * scale))
    throw ArgumentError("metric is not positive definite");

  FormGram out;
  out.n = static_cast<int>(n);
  for (int k = 0; k <= n; ++k) {
    const auto masks = masksOfDegree(static_cast<int>(n), k);
    const auto size = static_cast<Index>(masks.size());
    Matrix block(size, size);
    for (Index i = 0; i < size; ++i)
      for (Index j = 0; j < size; ++j)
        block(i, j) = minor(g, masks[static_cast<std::size_t>(i)], masks[static_cast<std::size_t>(j)],
                            static_cast<int>(n));
    out.blocks.push_back(std::move(block));
  }
  return out;
}

Matrix FormGram::full() const {
  const Index dim = Index{1} << n;
  Matrix m = Matrix::Zero(dim, dim);
  for (int k = 0; k <= n; ++k) {
    const auto masks = masksOfDegree(n, k);
    for (std::size_t i = 0; i < masks.size(); ++i)
      for (std::size_t j = 0; j < masks.size(); ++j)
        m(masks[i], masks[j]) = blocks[static_cast<std::size_t>(k)](static_cast<Index>(i), static_cast<Index>(j));
  }
  return m;
}

}  // namespace diracfc
