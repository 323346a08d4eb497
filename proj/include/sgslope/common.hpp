#pragma once

#include <stdexcept>
#include <string>

namespace sgslope {

/// Thrown when an iterative routine fails numerically (divergence, no
/// bracket, ...). Callers that map errors to process exit codes should treat
/// this as a numerical failure, distinct from bad arguments.
struct numerical_error : std::runtime_error {
  explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Thrown when a requested configuration is structurally unusable (for
/// example a penalty formula that degenerates for the given parameters),
/// as opposed to a malformed argument.
struct config_error : std::runtime_error {
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace sgslope
