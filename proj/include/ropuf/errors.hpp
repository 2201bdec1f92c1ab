#pragma once

#include <stdexcept>
#include <string>

namespace ropuf {

/// Malformed input: config files, challenge strings, CLI arguments.
/// Maps to process exit code 1.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string &message) : std::runtime_error(message) {}
};

/// A domain invariant was violated (level spacing, index ranges,
/// mismatched topologies, ...). Maps to process exit code 2.
class DomainError : public std::runtime_error {
  public:
    explicit DomainError(const std::string &message) : std::runtime_error(message) {}
};

/// Operating point below the transistor threshold voltage; the delay
/// model has no physical meaning there.
class VoltageBelowThreshold : public DomainError {
  public:
    VoltageBelowThreshold(double v, double v_th)
        : DomainError("supply voltage " + std::to_string(v) + " V is not above the threshold voltage " +
                      std::to_string(v_th) + " V at this temperature")
    {
    }
};

} // namespace ropuf
