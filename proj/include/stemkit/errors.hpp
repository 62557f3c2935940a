#pragma once

#include <stdexcept>
#include <string>

namespace stemkit {

// Error taxonomy mirrored by the CLI exit codes: 2 = configuration,
// 3 = data, 4 = internal/contract.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : DataError {
  explicit IoError(const std::string& msg) : DataError(msg) {}
};

struct FormatError : DataError {
  explicit FormatError(const std::string& msg) : DataError(msg) {}
};

// Thrown when a metric is mathematically undefined for the given input
// (e.g. SI-SDR against a zero-energy reference). Callers route such stems
// to the silence metrics instead of treating this as a failure.
struct MetricUndefinedError : DataError {
  explicit MetricUndefinedError(const std::string& msg) : DataError(msg) {}
};

struct ContractError : std::logic_error {
  explicit ContractError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace stemkit
