// SPDX-License-Identifier: Apache-2.0
#include "diracfc/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace diracfc {

namespace {
std::atomic<int> gThreads{1};
}

void setThreadCount(int threads) { gThreads = std::max(1, threads); }

int threadCount() { return gThreads.load(); }

void parallelFor(Index count, const std::function<void(Index)>& body) {
  const int threads = static_cast<int>(std::min<Index>(threadCount(), count));
  if (threads <= 1) {
    for (Index i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failureMutex;
  std::vector<std::jthread> workers;
  for (int w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      try {
        for (Index i = w; i < count; i += threads) body(i);
      } catch (...) {
        std::lock_guard lock(failureMutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  workers.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace diracfc
