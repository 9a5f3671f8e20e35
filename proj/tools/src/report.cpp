// SPDX-License-Identifier: Apache-2.0
#include "report.hpp"

#include <cmath>
#include <fstream>

#include "diracfc/errors.hpp"
#include "diracfc/io.hpp"

namespace diracfc::cli {

std::string toString(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Warn: return "warn";
    case Status::Fail: return "fail";
  }
  return "fail";
}

void ExperimentOutput::bound(const std::string& name, double value, double tolerance, bool soft, std::string note) {
  const bool ok = std::isfinite(value) && value <= tolerance;
  checks.push_back({name, ok ? Status::Pass : (soft ? Status::Warn : Status::Fail), value, tolerance, std::move(note)});
}

void ExperimentOutput::flag(const std::string& name, Status status, std::string note) {
  checks.push_back({name, status, 0.0, 0.0, std::move(note)});
}

Status ExperimentOutput::overall() const {
  Status s = Status::Pass;
  for (const auto& c : checks) s = std::max(s, c.status);
  return s;
}

std::string num(double v) { return io::formatDouble(v); }

Json finiteOrNull(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

void writeCsv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

}  // namespace diracfc::cli
