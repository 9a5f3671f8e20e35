// SPDX-License-Identifier: Apache-2.0
#include "run.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "config.hpp"
#include "diracfc/errors.hpp"
#include "diracfc/io.hpp"
#include "diracfc/parallel.hpp"
#include "diracfc/version.hpp"
#include "experiments.hpp"

namespace diracfc::cli {

namespace {

Json versions() {
  return {{"diracfc", DIRACFC_VERSION}, {"eigen", DIRACFC_EIGEN_VERSION}, {"json", "nlohmann " + std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
}

Json errorPayload(const std::exception& e) {
  Json p{{"message", e.what()}};
  if (const auto* x = dynamic_cast<const SpectralCollision*>(&e)) {
    p["type"] = "SpectralCollision";
    p["tau"] = {x->tau().real(), x->tau().imag()};
  } else if (const auto* x = dynamic_cast<const SectorViolation*>(&e)) {
    p["type"] = "SectorViolation";
    p["measuredOmega"] = x->measuredOmega();
  } else if (const auto* x = dynamic_cast<const OracleUnavailable*>(&e)) {
    p["type"] = "OracleUnavailable";
    p["condition"] = x->condition();
  } else if (const auto* x = dynamic_cast<const DecompositionFailure*>(&e)) {
    p["type"] = "DecompositionFailure";
    p["separation"] = x->separation();
  } else if (const auto* x = dynamic_cast<const ConfigError*>(&e)) {
    p["type"] = "ConfigError";
    p["field"] = x->field();
  } else if (const auto* x = dynamic_cast<const ParseError*>(&e)) {
    p["type"] = "ParseError";
    p["line"] = x->line();
  } else if (dynamic_cast<const PreconditionError*>(&e)) {
    p["type"] = "PreconditionError";
  } else if (dynamic_cast<const ArgumentError*>(&e)) {
    p["type"] = "ArgumentError";
  } else if (dynamic_cast<const NumericalError*>(&e)) {
    p["type"] = "NumericalError";
  } else {
    p["type"] = "Error";
  }
  return p;
}

int exitCodeFor(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ParseError*>(&e) ||
      dynamic_cast<const PreconditionError*>(&e) || dynamic_cast<const ArgumentError*>(&e))
    return kConfigError;
  return kFailure;
}

void writeJson(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

int run(const RunOptions& options, std::ostream& log) {
  std::filesystem::path outDir = options.outDir;
  Json report;
  try {
    ExperimentConfig config = loadConfig(options.configPath);
    if (options.seed) {
      config.seed = *options.seed;
      config.echo["seed"] = *options.seed;
    }
    if (outDir.empty()) outDir = config.output.empty() ? "." : config.output;
    std::filesystem::create_directories(outDir);
    if (options.threads > 0) setThreadCount(options.threads);

    const auto tolerances = tolerancesFor(config);
    const auto start = std::chrono::steady_clock::now();
    ExperimentOutput result;
    try {
      result = runExperiment(config, tolerances);
    } catch (const std::exception& e) {
      report = {{"config", config.echo}, {"experiment", config.experiment}, {"status", "fail"},
                {"error", errorPayload(e)}, {"tolerances", tolerances}, {"versions", versions()}};
      writeJson(outDir / "report.json", report);
      log << "error: " << e.what() << '\n';
      return exitCodeFor(e);
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    Json checks = Json::array();
    for (const auto& c : result.checks)
      checks.push_back({{"name", c.name}, {"status", toString(c.status)}, {"value", finiteOrNull(c.value)},
                        {"tolerance", c.tolerance}, {"note", c.note}});
    Json outputs = Json::array();
    for (const auto& t : result.tables) {
      writeCsv((outDir / t.file).string(), t);
      outputs.push_back(t.file);
    }
    const Status status = result.overall();
    report = {{"config", config.echo},     {"experiment", config.experiment}, {"seed", config.seed},
              {"status", toString(status)}, {"checks", checks},               {"results", result.results},
              {"tolerances", tolerances},   {"versions", versions()},         {"outputs", outputs}};
    if (!options.repro) report["runtime"] = {{"seconds", seconds}, {"threads", threadCount()}};
    writeJson(outDir / "report.json", report);

    for (const auto& c : result.checks) log << toString(c.status) << "  " << c.name << (c.note.empty() ? "" : "  (" + c.note + ")") << '\n';
    log << config.experiment << ": " << toString(status) << '\n';
    switch (status) {
      case Status::Pass: return kPass;
      case Status::Warn: return kWarnings;
      case Status::Fail: return kFailure;
    }
    return kFailure;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    if (!outDir.empty()) {
      try {
        std::filesystem::create_directories(outDir);
        writeJson(outDir / "report.json", {{"status", "fail"}, {"error", errorPayload(e)}, {"versions", versions()}});
      } catch (const std::exception&) {
      }
    }
    return exitCodeFor(e);
  }
}

int exportOperator(const std::string& configPath, const std::string& target, const std::string& outPath,
                   std::ostream& log) {
  try {
    const ExperimentConfig config = loadConfig(configPath);
    const LinearOperator op = exportTarget(config, target);
    io::writeMatrixMarketFile(outPath, op);
    log << target << ": " << op.rows() << " x " << op.cols() << " written to " << outPath << '\n';
    return kPass;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return exitCodeFor(e);
  }
}

int importOperator(const std::string& path, const std::optional<std::string>& compareWith, std::ostream& log) {
  try {
    const SparseMatrix a = io::readMatrixMarketFile(path);
    log << path << ": " << a.rows() << " x " << a.cols() << ", " << a.nonZeros() << " stored entries\n";
    if (!compareWith) return kPass;
    const SparseMatrix b = io::readMatrixMarketFile(*compareWith);
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
      log << "shape mismatch\n";
      return kFailure;
    }
    const SparseMatrix d = a - b;
    double worst = 0.0;
    for (Index k = 0; k < d.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(d, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    log << "max difference: " << io::formatDouble(worst) << '\n';
    return worst == 0.0 ? kPass : kFailure;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return exitCodeFor(e);
  }
}

}  // namespace diracfc::cli
