#pragma once

#include <stdexcept>
#include <string>

namespace graphbandit {

// Invalid input: malformed files, inconsistent configuration, illegal
// partitions. Maps to CLI exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Partition rejected by a legality clause; message names the clause.
struct IllegalPartition : ConfigError {
  explicit IllegalPartition(const std::string& what) : ConfigError(what) {}
};

// Failure while running: solver non-convergence, contract violations.
// Maps to CLI exit code 3.
struct RunFailure : std::runtime_error {
  explicit RunFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace graphbandit
