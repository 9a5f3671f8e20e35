// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "diracfc/types.hpp"

namespace diracfc {

// Subset of {1..n} stored as a bitmask; axis k lives in bit k-1.
// Fibers are ordered by increasing mask value. This order is part of the
// CSV and Matrix Market layouts.
using MultiIndex = std::uint32_t;

inline constexpr int kMaxDimension = 3;

int degree(MultiIndex s);
bool contains(MultiIndex s, int axis);
MultiIndex withAxis(MultiIndex s, int axis);

// Sign of e_k ^ e_S relative to e_{S u {k}}: (-1)^#{j in S : j < k}.
// Returns nullopt when k is already in S (the wedge vanishes).
std::optional<int> insertionSign(int axis, MultiIndex s, int n);

// Fiber description: either the full exterior algebra over R^n or a plain C^dim.
class FiberLayout {
 public:
  static FiberLayout forms(int n);
  static FiberLayout plain(int dim);

  int dim() const { return dim_; }
  bool isForms() const { return n_ > 0; }
  int formDimension() const { return n_; }
  MultiIndex mask(int component) const { return masks_.at(static_cast<std::size_t>(component)); }
  int component(MultiIndex s) const;
  std::vector<int> componentsOfDegree(int k) const;

  bool operator==(const FiberLayout& other) const = default;

 private:
  FiberLayout() = default;
  int dim_ = 0;
  int n_ = 0;
  std::vector<MultiIndex> masks_;
};

// Hermitian form induced on each degree by a metric on 1-forms:
// (e_S, e_T) = det G[S, T].
struct FormGram {
  int n = 0;
  std::vector<Matrix> blocks;  // blocks[k] indexed by degree-k masks in increasing order

  // Assembled on the full bundle in mask order.
  Matrix full() const;
};

FormGram gramOnForms(const Matrix& g);

}  // namespace diracfc
