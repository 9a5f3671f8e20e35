// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include <CLI11.hpp>

#include "run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Perturbed Dirac operator experiments"};
  app.require_subcommand(1);

  diracfc::cli::RunOptions options;
  std::uint64_t seed = 0;
  auto* run = app.add_subcommand("run", "run the experiment described by a JSON config");
  run->add_option("--config", options.configPath, "experiment config")->required()->check(CLI::ExistingFile);
  run->add_option("--out", options.outDir, "output directory");
  auto* seedOpt = run->add_option("--seed", seed, "override the config seed");
  run->add_option("--threads", options.threads, "worker threads")->check(CLI::NonNegativeNumber);
  run->add_flag("--repro", options.repro, "omit timing so reports are byte-identical");

  std::string exportConfig, target = "piB", exportOut;
  auto* exp = app.add_subcommand("export", "write an assembled operator as Matrix Market");
  exp->add_option("--config", exportConfig, "config naming the grid and source")->required()->check(CLI::ExistingFile);
  exp->add_option("--operator", target, "gamma, gammaStar, b1, b2, gammaStarB or piB");
  exp->add_option("--out", exportOut, "output .mtx file")->required();

  std::string importPath, comparePath;
  auto* imp = app.add_subcommand("import", "read a Matrix Market file, optionally diffing it against another");
  imp->add_option("--in", importPath, "input .mtx file")->required()->check(CLI::ExistingFile);
  auto* cmp = imp->add_option("--compare", comparePath, "second .mtx file")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : diracfc::cli::kConfigError;
  }

  if (*run) {
    if (*seedOpt) options.seed = seed;
    return diracfc::cli::run(options, std::cout);
  }
  if (*exp) return diracfc::cli::exportOperator(exportConfig, target, exportOut, std::cout);
  return diracfc::cli::importOperator(importPath, *cmp ? std::optional<std::string>(comparePath) : std::nullopt, std::cout);
}
