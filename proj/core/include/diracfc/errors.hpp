// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

#include "diracfc/types.hpp"

namespace diracfc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// (I + tau*Pi) is numerically singular.
class SpectralCollision : public NumericalError {
 public:
  SpectralCollision(Complex tau, const std::string& what) : NumericalError(what), tau_(tau) {}
  Complex tau() const { return tau_; }

 private:
  Complex tau_;
};

class SectorViolation : public NumericalError {
 public:
  SectorViolation(double measuredOmega, const std::string& what)
      : NumericalError(what), measuredOmega_(measuredOmega) {}
  double measuredOmega() const { return measuredOmega_; }

 private:
  double measuredOmega_;
};

class OracleUnavailable : public NumericalError {
 public:
  OracleUnavailable(double condition, const std::string& what)
      : NumericalError(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

// The three subspaces do not span, or their sum is nearly degenerate.
class DecompositionFailure : public NumericalError {
 public:
  DecompositionFailure(double separation, const std::string& what)
      : NumericalError(what), separation_(separation) {}
  double separation() const { return separation_; }

 private:
  double separation_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace diracfc
