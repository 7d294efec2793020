#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pdmpline {

/// Argument outside the mathematical domain of an operation (negative workload,
/// nonpositive shape parameter, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid scenario or run configuration. `key()` names the offending entry
/// when one is known (e.g. "model.theta1").
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& message, std::string key = {})
      : std::invalid_argument(key.empty() ? message : key + ": " + message),
        key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// A numerical invariant of the simulator was violated. Indicates a bug, not a
/// bad input.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Failure inside one Monte Carlo sample, tagged with the sample index.
class SampleError : public std::runtime_error {
 public:
  SampleError(std::size_t index, const std::string& what)
      : std::runtime_error("sample " + std::to_string(index) + ": " + what),
        index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace pdmpline
