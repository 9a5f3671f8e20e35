// SPDX-License-Identifier: Apache-2.0
#include "config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "diracfc/errors.hpp"

namespace diracfc::cli {

namespace {

enum class ParamType { Number, Integer, String, Numbers, Boolean, Functions };

using ParamTable = std::map<std::string, ParamType>;

const std::map<std::string, ParamTable>& paramTables() {
  using P = ParamType;
  static const std::map<std::string, ParamTable> tables{
      {"validate", {{"samples", P::Integer}}},
      {"sector", {{"omega", P::Number}, {"angles", P::Integer}, {"radii", P::Integer}}},
      {"funcalc", {{"functions", P::Functions}}},
      {"hodge", {{"limitStart", P::Number}, {"doublings", P::Integer}}},
      {"quad", {}},
      {"carleson", {{"samples", P::Integer}, {"densityMin", P::Number}, {"densityCount", P::Integer}}},
      {"offdiag", {{"family", P::String}, {"ts", P::Numbers}, {"ratios", P::Numbers}}},
      {"cauchy", {{"shape", P::String}, {"amplitude", P::Number}, {"offset", P::Number}, {"samples", P::Numbers}}},
      {"kato", {{"coefficient", P::String}, {"value", P::Number}, {"omega", P::Number}, {"cells", P::Integer},
                {"path", P::String}}},
      {"forms", {{"b", P::String}, {"omega", P::Number}}},
      {"lipschitz", {{"function", P::String}, {"scales", P::Numbers}, {"size", P::Number}, {"quadScale", P::Number}}},
      {"metric", {{"hNorm", P::Number}, {"scales", P::Numbers}, {"seeds", P::Integer}}},
  };
  return tables;
}

const std::map<std::string, std::map<std::string, double>>& toleranceTables() {
  static const std::map<std::string, std::map<std::string, double>> tables{
      {"validate", {{"nilpotency", 1e-13}, {"h3", 1e-10}}},
      {"sector", {{"resolventConstant", 1e6}}},
      {"funcalc", {{"crossValidation", 1e-6}}},
      {"hodge", {{"algebra", 1e-8}, {"orthogonality", 1e-10}, {"limitOrder", 0.2}, {"spectral", 1e-8}}},
      {"quad", {{"flat", 1e-6}, {"resolution", 1e-6}, {"refinement", 0.05}}},
      {"carleson", {{"embedding", 16.0}}},
      {"offdiag", {{"decayFactor", 4.0}, {"floor", 1e-12}}},
      {"cauchy", {{"routes", 1e-5}, {"square", 1e-6}, {"symbol", 1e-8}}},
      {"kato", {{"identity", 1e-8}}},
      {"forms", {{"h3", 1e-10}, {"identity", 1e-8}}},
      {"lipschitz", {{"limitSpread", 0.05}, {"h3", 1e-10}}},
      {"metric", {{"seedSpread", 0.2}}},
  };
  return tables;
}

std::size_t lineOf(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

void checkType(const Json& value, ParamType type, const std::string& field) {
  const bool ok = [&] {
    switch (type) {
      case ParamType::Number: return value.is_number();
      case ParamType::Integer: return value.is_number_integer();
      case ParamType::String: return value.is_string();
      case ParamType::Boolean: return value.is_boolean();
      case ParamType::Numbers:
        return value.is_array() && std::all_of(value.begin(), value.end(), [](const Json& v) { return v.is_number(); });
      case ParamType::Functions:
        return value.is_array() &&
               std::all_of(value.begin(), value.end(), [](const Json& v) { return v.is_string() || v.is_object(); });
    }
    return false;
  }();
  if (!ok) throw ConfigError(field, "wrong type");
}

std::string resolvePath(const std::string& base, const std::string& path) {
  if (path == "identity" || path.empty()) return path;
  const std::filesystem::path p(path);
  return p.is_absolute() ? path : (std::filesystem::path(base) / p).string();
}

}  // namespace

ObjectReader::ObjectReader(const Json& object, std::string path) : object_(object), path_(std::move(path)) {
  if (!object_.is_object()) throw ConfigError(path_, "expected an object");
}

const Json& ObjectReader::raw(const std::string& key) {
  seen_.insert(key);
  if (!object_.contains(key)) throw ConfigError(field(key), "missing");
  return object_.at(key);
}

double ObjectReader::number(const std::string& key, std::optional<double> fallback) {
  seen_.insert(key);
  if (!object_.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(field(key), "missing");
  }
  const Json& v = object_.at(key);
  if (!v.is_number()) throw ConfigError(field(key), "expected a number");
  return v.get<double>();
}

int ObjectReader::integer(const std::string& key, std::optional<int> fallback) {
  seen_.insert(key);
  if (!object_.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(field(key), "missing");
  }
  const Json& v = object_.at(key);
  if (!v.is_number_integer()) throw ConfigError(field(key), "expected an integer");
  return v.get<int>();
}

std::string ObjectReader::string(const std::string& key, std::optional<std::string> fallback) {
  seen_.insert(key);
  if (!object_.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(field(key), "missing");
  }
  const Json& v = object_.at(key);
  if (!v.is_string()) throw ConfigError(field(key), "expected a string");
  return v.get<std::string>();
}

bool ObjectReader::boolean(const std::string& key, std::optional<bool> fallback) {
  seen_.insert(key);
  if (!object_.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(field(key), "missing");
  }
  const Json& v = object_.at(key);
  if (!v.is_boolean()) throw ConfigError(field(key), "expected a boolean");
  return v.get<bool>();
}

std::vector<double> ObjectReader::numbers(const std::string& key, std::optional<std::vector<double>> fallback) {
  seen_.insert(key);
  if (!object_.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(field(key), "missing");
  }
  const Json& v = object_.at(key);
  checkType(v, ParamType::Numbers, field(key));
  return v.get<std::vector<double>>();
}

void ObjectReader::finish() const {
  for (const auto& [key, value] : object_.items())
    if (!seen_.count(key)) throw ConfigError(field(key), "unknown key");
}

const std::set<std::string>& experimentNames() {
  static const std::set<std::string> names = [] {
    std::set<std::string> s;
    for (const auto& [name, table] : paramTables()) s.insert(name);
    return s;
  }();
  return names;
}

ExperimentConfig parseConfig(const std::string& text, const std::string& baseDir) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError("", "line " + std::to_string(lineOf(text, e.byte)) + ": " + e.what());
  }

  ExperimentConfig config;
  ObjectReader top(root, "");
  config.experiment = top.string("experiment");
  if (!experimentNames().count(config.experiment)) throw ConfigError("experiment", "unknown experiment '" + config.experiment + "'");

  {
    ObjectReader g(top.raw("grid"), "grid");
    config.grid.n = g.integer("n");
    config.grid.m = g.integer("m");
    config.grid.length = g.number("length", 1.0);
    g.finish();
    try {
      config.grid.validate();
    } catch (const ArgumentError& e) {
      throw ConfigError("grid", e.what());
    }
  }

  if (top.has("seed")) {
    const Json& s = top.raw("seed");
    if (!s.is_number_unsigned()) throw ConfigError("seed", "expected a nonnegative integer");
    config.seed = s.get<std::uint64_t>();
  }

  if (top.has("source")) {
    ObjectReader s(top.raw("source"), "source");
    const std::string kind = s.string("kind");
    if (kind == "flat") {
      config.source.kind = SourceKind::Flat;
    } else if (kind == "randomAccretive") {
      config.source.kind = SourceKind::RandomAccretive;
      config.source.omega = s.number("omega");
      if (!(config.source.omega >= 0.0 && config.source.omega < kPi / 2.0))
        throw ConfigError("source.omega", "must lie in [0, pi/2)");
    } else if (kind == "block") {
      config.source.kind = SourceKind::Block;
      config.source.a1 = resolvePath(baseDir, s.string("a1", "identity"));
      config.source.a2 = resolvePath(baseDir, s.string("a2", "identity"));
    } else if (kind == "file") {
      config.source.kind = SourceKind::File;
      config.source.gamma = resolvePath(baseDir, s.string("gamma"));
      config.source.b1 = resolvePath(baseDir, s.string("b1"));
      config.source.b2 = resolvePath(baseDir, s.string("b2"));
    } else {
      throw ConfigError("source.kind", "unknown source '" + kind + "'");
    }
    s.finish();
  }

  if (top.has("tgrid")) {
    ObjectReader t(top.raw("tgrid"), "tgrid");
    TGrid g{t.number("tMin"), t.number("tMax"), t.integer("count")};
    t.finish();
    try {
      g.validate();
    } catch (const ArgumentError& e) {
      throw ConfigError("tgrid", e.what());
    }
    config.tgrid = g;
  }

  if (top.has("contour")) {
    ObjectReader c(top.raw("contour"), "contour");
    ContourSpec spec{c.number("theta"), c.number("rMin"), c.number("rMax"), c.integer("nodesPerRay")};
    c.finish();
    try {
      spec.validate();
    } catch (const ArgumentError& e) {
      throw ConfigError("contour", e.what());
    }
    config.contour = spec;
  }

  const auto& defaults = toleranceTables().at(config.experiment);
  if (top.has("tolerances")) {
    ObjectReader t(top.raw("tolerances"), "tolerances");
    for (const auto& [name, value] : defaults)
      if (t.has(name)) {
        const double v = t.number(name);
        if (!(v > 0.0)) throw ConfigError(t.field(name), "must be positive");
        config.toleranceOverrides[name] = v;
      }
    t.finish();
  }

  if (top.has("params")) {
    const Json& p = top.raw("params");
    if (!p.is_object()) throw ConfigError("params", "expected an object");
    const auto& table = paramTables().at(config.experiment);
    for (const auto& [key, value] : p.items()) {
      const auto it = table.find(key);
      if (it == table.end()) throw ConfigError("params." + key, "unknown key for experiment " + config.experiment);
      checkType(value, it->second, "params." + key);
    }
    config.params = p;
  }

  if (config.experiment == "metric") {
    const double h = config.params.value("hNorm", 0.2);
    if (!(h >= 0.0)) throw ConfigError("params.hNorm", "must be nonnegative");
    if (!(h < 0.25)) throw ConfigError("params.hNorm", "metric perturbations need ||h|| < 1/4");
  }

  config.output = top.string("output", "");
  top.finish();
  config.echo = root;
  return config;
}

ExperimentConfig loadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parseConfig(ss.str(), std::filesystem::path(path).parent_path().string());
}

std::map<std::string, double> tolerancesFor(const ExperimentConfig& config) {
  auto out = toleranceTables().at(config.experiment);
  for (const auto& [name, value] : config.toleranceOverrides) out[name] = value;
  return out;
}

}  // namespace diracfc::cli
