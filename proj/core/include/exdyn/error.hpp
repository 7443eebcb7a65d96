#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace exdyn {

// Invalid specification or configuration (bad parameters, dimension
// mismatches, malformed config files). Maps to CLI exit code 1.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure failed: divergence, non-convergence, degenerate
// samples. Carries the pipeline stage that raised it. Maps to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(std::string stage, const std::string& what)
      : std::runtime_error(what), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

// Orbit left the finite reals. `index` counts steps taken from the initial
// state (transient included).
class DivergenceError : public NumericalError {
 public:
  DivergenceError(const std::string& what, std::size_t index)
      : NumericalError("orbit", what), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

// I/O failure; the message always names the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace exdyn
