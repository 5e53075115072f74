#pragma once

#include <stdexcept>
#include <string>

namespace bellmeet {

// Bad user input: rejected before any computation starts. CLI exit code 2.
struct ValidationError : std::invalid_argument {
  explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
};

// A solver gave up (non-convergence, detected infeasibility where feasibility
// was required, iteration cap). Carries residual details in the message.
// CLI exit code 3.
struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace bellmeet
