#pragma once

#include <stdexcept>
#include <string>

namespace deltafilter {

/// Invalid run or construction parameters. `field()` names the offending input.
class ConfigError : public std::invalid_argument {
public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

/// The kernel linear system was singular or the solved polynomial failed its checks.
class KernelConstructionError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised during time integration (NaN, non-positive density or pressure).
class SimulationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class PositivityError : public SimulationError {
public:
  PositivityError(const std::string& quantity, long node, double time, double value)
      : SimulationError("non-positive " + quantity + " at node " + std::to_string(node) +
                        ", t=" + std::to_string(time) + " (value " + std::to_string(value) + ")"),
        quantity_(quantity), node_(node), time_(time) {}
  const std::string& quantity() const noexcept { return quantity_; }
  long node() const noexcept { return node_; }
  double time() const noexcept { return time_; }

private:
  std::string quantity_;
  long node_;
  double time_;
};

/// A reference evaluator failed to converge; the reference value cannot be trusted.
class OracleError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reference data (e.g. the Shu-Osher file) could not be located or read.
class ReferenceUnavailable : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace deltafilter
