// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace diracfc::cli {

enum ExitCode : int { kPass = 0, kFailure = 1, kWarnings = 2, kConfigError = 3 };

struct RunOptions {
  std::string configPath;
  std::string outDir;  // overrides the config's "output"
  std::optional<std::uint64_t> seed;
  int threads = 0;     // 0 keeps the current setting
  bool repro = false;  // drop timing and thread count from the report
};

int run(const RunOptions& options, std::ostream& log);

int exportOperator(const std::string& configPath, const std::string& target, const std::string& outPath,
                   std::ostream& log);

// Reads a Matrix Market file; with a second file, reports the largest entry difference.
int importOperator(const std::string& path, const std::optional<std::string>& compareWith, std::ostream& log);

}  // namespace diracfc::cli
