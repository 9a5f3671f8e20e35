// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include "diracfc/types.hpp"

namespace diracfc {

void setThreadCount(int threads);
int threadCount();

// Runs body(i) for i in [0, count). Work is split in fixed chunks so results
// that depend only on i are identical for any thread count.
void parallelFor(Index count, const std::function<void(Index)>& body);

// Sum of term(i) accumulated per fixed-size chunk, then chunks in order.
// The rounding pattern does not depend on the thread count. Chunks are
// processed in waves so at most threadCount() partial sums are alive.
template <class T, class Term>
T orderedSum(Index count, const T& zero, Term&& term, Index chunk = 16) {
  const Index chunks = (count + chunk - 1) / chunk;
  const Index wave = std::max<Index>(1, threadCount());
  T total = zero;
  for (Index first = 0; first < chunks; first += wave) {
    const Index inWave = std::min(wave, chunks - first);
    std::vector<T> partial(static_cast<std::size_t>(inWave), zero);
    parallelFor(inWave, [&](Index w) {
      const Index c = first + w;
      T acc = zero;
      const Index end = std::min(count, (c + 1) * chunk);
      for (Index i = c * chunk; i < end; ++i) acc += term(i);
      partial[static_cast<std::size_t>(w)] = std::move(acc);
    });
    for (auto& p : partial) total += p;
  }
  return total;
}

}  // namespace diracfc
