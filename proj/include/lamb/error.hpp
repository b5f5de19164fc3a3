#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lamb {

enum class ErrorCode {
  GridError,
  WindowError,
  NotHyperbolic,
  NotStationary,
  CannotLocalize,
  Diverged,
  BlowUp,
  NoConvergence,
  InconsistentInput,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

/// Solver and data errors carry a machine-readable code; the CLI writes it
/// into summary.json.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lamb
