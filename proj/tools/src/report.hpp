// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace diracfc::cli {

enum class Status { Pass, Warn, Fail };

std::string toString(Status s);

struct Check {
  std::string name;
  Status status = Status::Pass;
  double value = 0.0;
  double tolerance = 0.0;
  std::string note;
};

struct CsvTable {
  std::string file;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

struct ExperimentOutput {
  Json results = Json::object();
  std::vector<Check> checks;
  std::vector<CsvTable> tables;

  // value <= tolerance passes; otherwise failure, or a warning when soft.
  void bound(const std::string& name, double value, double tolerance, bool soft = false, std::string note = {});
  void flag(const std::string& name, Status status, std::string note = {});
  Status overall() const;
};

std::string num(double v);  // 17 significant digits
Json finiteOrNull(double v);

void writeCsv(const std::string& path, const CsvTable& table);

}  // namespace diracfc::cli
