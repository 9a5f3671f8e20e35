// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include "diracfc/funcalc.hpp"
#include "diracfc/grid.hpp"
#include "diracfc/quadest.hpp"

namespace diracfc::cli {

using Json = nlohmann::json;

// Reads one JSON object and rejects keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const Json& object, std::string path);

  bool has(const std::string& key) const { return object_.contains(key); }
  const Json& raw(const std::string& key);
  double number(const std::string& key, std::optional<double> fallback = std::nullopt);
  int integer(const std::string& key, std::optional<int> fallback = std::nullopt);
  std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt);
  bool boolean(const std::string& key, std::optional<bool> fallback = std::nullopt);
  std::vector<double> numbers(const std::string& key, std::optional<std::vector<double>> fallback = std::nullopt);
  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  void finish() const;

 private:
  const Json& object_;
  std::string path_;
  std::set<std::string> seen_;
};

enum class SourceKind { Flat, RandomAccretive, Block, File };

struct SourceConfig {
  SourceKind kind = SourceKind::Flat;
  double omega = 0.0;
  std::string a1 = "identity";  // block: CSV path or "identity"
  std::string a2 = "identity";
  std::string gamma, b1, b2;    // file: Matrix Market paths
};

struct ExperimentConfig {
  std::string experiment;
  GridSpec grid;
  SourceConfig source;
  std::optional<TGrid> tgrid;
  std::optional<ContourSpec> contour;
  std::map<std::string, double> toleranceOverrides;
  Json params = Json::object();
  std::string output;
  std::uint64_t seed = 1;
  Json echo;
};

const std::set<std::string>& experimentNames();

// Throws ConfigError with the offending field, or with "line N" for JSON syntax errors.
ExperimentConfig parseConfig(const std::string& text, const std::string& baseDir = ".");
ExperimentConfig loadConfig(const std::string& path);

// Defaults per experiment; overrides must name one of them.
std::map<std::string, double> tolerancesFor(const ExperimentConfig& config);

}  // namespace diracfc::cli
