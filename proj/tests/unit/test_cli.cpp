// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "config.hpp"
#include "diracfc/errors.hpp"
#include "run.hpp"

using namespace diracfc;
using namespace diracfc::cli;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = DIRACFC_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("diracfc_unit_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string configErrorField(const std::string& text) {
  try {
    parseConfig(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<no error>";
}

int runConfig(const fs::path& config, const fs::path& out, int threads = 0, bool repro = true) {
  std::ostringstream log;
  RunOptions o;
  o.configPath = config.string();
  o.outDir = out.string();
  o.threads = threads;
  o.repro = repro;
  return run(o, log);
}

}  // namespace

TEST_CASE("minimal config") {
  const ExperimentConfig c = parseConfig(R"({"experiment": "quad", "grid": {"n": 2, "m": 4}})");
  CHECK(c.experiment == "quad");
  CHECK(c.grid.n == 2);
  CHECK(c.grid.m == 4);
  CHECK(c.source.kind == SourceKind::Flat);
  CHECK(c.seed == 1);
  CHECK_FALSE(c.tgrid.has_value());
  CHECK(experimentNames().count("metric") == 1);
  CHECK(experimentNames().size() == 12);
}

TEST_CASE("config errors name the offending field") {
  CHECK(configErrorField(R"({"experiment": "quad", "grid": {"n": 1, "m": 4}, "bogus": 1})") == "bogus");
  CHECK(configErrorField(R"({"experiment": "nope", "grid": {"n": 1, "m": 4}})") == "experiment");
  CHECK(configErrorField(R"({"experiment": "quad", "grid": {"n": 4, "m": 4}})").rfind("grid", 0) == 0);
  CHECK(configErrorField(R"({"experiment": "quad", "grid": {"n": 1, "m": 4}, "params": {"x": 1}})") == "params.x");
  CHECK(configErrorField(R"({"experiment": "metric", "grid": {"n": 2, "m": 4}, "params": {"hNorm": 0.3}})") ==
        "params.hNorm");
  CHECK(configErrorField(R"({"experiment": "quad", "grid": {"n": 1, "m": 4}, "seed": -2})") == "seed");
  CHECK(configErrorField(R"({"experiment": "quad", "grid": {"n": 1, "m": 4}, "tolerances": {"h3": 1}})")
            .rfind("tolerances", 0) == 0);
}

TEST_CASE("JSON syntax errors carry the line") {
  try {
    parseConfig("{\n  \"experiment\": \"quad\",\n  \"grid\": {\"n\": 1 \"m\": 4}\n}");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("tolerance defaults and overrides") {
  auto c = parseConfig(R"({"experiment": "quad", "grid": {"n": 1, "m": 4}})");
  auto t = tolerancesFor(c);
  CHECK(t.at("flat") == 1e-6);
  CHECK(t.at("resolution") == 1e-6);
  c = parseConfig(R"({"experiment": "quad", "grid": {"n": 1, "m": 4}, "tolerances": {"flat": 1e-3}})");
  CHECK(tolerancesFor(c).at("flat") == 1e-3);
}

TEST_CASE("shipped configs parse") {
  int count = 0;
  for (const auto& entry : fs::directory_iterator(kConfigs)) {
    if (entry.path().extension() != ".json") continue;
    ++count;
    if (entry.path().stem() == "metric_too_large")
      CHECK_THROWS_AS(loadConfig(entry.path().string()), ConfigError);
    else
      CHECK_NOTHROW(loadConfig(entry.path().string()));
  }
  CHECK(count >= 12);
}

TEST_CASE("run writes a report and maps outcomes to exit codes") {
  const fs::path out = scratch("run");
  CHECK(runConfig(kConfigs / "validate.json", out) == kPass);
  const std::string report = slurp(out / "report.json");
  for (const char* key : {"\"config\"", "\"checks\"", "\"results\"", "\"tolerances\"", "\"versions\"", "\"status\""})
    CHECK(report.find(key) != std::string::npos);
  CHECK(report.find("\"runtime\"") == std::string::npos);

  const fs::path bad = scratch("bad");
  CHECK(runConfig(kConfigs / "metric_too_large.json", bad) == kConfigError);
  const std::string err = slurp(bad / "report.json");
  CHECK(err.find("\"ConfigError\"") != std::string::npos);
  CHECK(err.find("params.hNorm") != std::string::npos);

  std::ostringstream log;
  RunOptions missing;
  missing.configPath = (out / "does_not_exist.json").string();
  missing.outDir = out.string();
  CHECK(run(missing, log) == kConfigError);
}

TEST_CASE("reports are byte-identical across runs and thread counts") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  REQUIRE(runConfig(kConfigs / "quad_random.json", a, 1) == kPass);
  REQUIRE(runConfig(kConfigs / "quad_random.json", b, 2) == kPass);
  CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
  CHECK(slurp(a / "quad_curve.csv") == slurp(b / "quad_curve.csv"));
  CHECK_FALSE(slurp(a / "quad_curve.csv").empty());
}

TEST_CASE("export and import round trip") {
  const fs::path dir = scratch("mm");
  std::ostringstream log;
  for (const char* target : {"gamma", "piB"}) {
    const fs::path file = dir / (std::string(target) + ".mtx");
    REQUIRE(exportOperator((kConfigs / "validate_random.json").string(), target, file.string(), log) == kPass);
    CHECK(importOperator(file.string(), file.string(), log) == kPass);
  }
  CHECK(log.str().find("max difference: 0") != std::string::npos);
  CHECK(importOperator((dir / "gamma.mtx").string(), (dir / "piB.mtx").string(), log) == kFailure);
  CHECK(exportOperator((kConfigs / "validate.json").string(), "nonsense", (dir / "x.mtx").string(), log) ==
        kConfigError);

  std::ofstream(dir / "broken.mtx") << "%%MatrixMarket matrix coordinate complex general\n2 2 1\n1 1 oops\n";
  CHECK(importOperator((dir / "broken.mtx").string(), std::nullopt, log) == kConfigError);
}
