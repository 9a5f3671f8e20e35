// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>

#include "config.hpp"
#include "diracfc/gridops.hpp"
#include "report.hpp"

namespace diracfc::cli {

struct Source {
  Triple triple;
  bool identityB = false;  // B1 = B2 = I on the whole space
};

Source buildSource(const ExperimentConfig& config);

ExperimentOutput runExperiment(const ExperimentConfig& config, const std::map<std::string, double>& tolerances);

// gamma, gammaStar, b1, b2, gammaStarB or piB of the configured source.
LinearOperator exportTarget(const ExperimentConfig& config, const std::string& target);

}  // namespace diracfc::cli
