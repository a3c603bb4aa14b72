/**
 * @file errors.hpp
 * @brief Exception types shared by the library and the CLI.
 *
 * The CLI maps these onto exit codes: DomainError and ConfigError are usage
 * errors (2), SolverError and ConsistencyError are numerical errors (3),
 * IoError is 4.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace susyxxz {

/// Invalid sector label, chain length, or parameter range.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid run configuration (empty pool, zero runs, bad sweep grid, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Eigensolver failure; the message carries the sector key.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two estimators of the same quantity disagree beyond tolerance.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Too few usable points for a first-order fit.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace susyxxz
