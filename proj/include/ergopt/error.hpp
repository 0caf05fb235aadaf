#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ergopt {

enum class ErrorCode {
  MalformedInput,
  DimensionMismatch,
  NoCycle,
  NotTransitive,
  NotStronglyConnected,
  CapExceeded,
  Infeasible,
  InfeasibleR,
  NotInterior,
  MaxIters,
  DegenerateRotationSet,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library. The context map carries the
// structured detail the CLI turns into {code, message, context}.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::map<std::string, std::string> context = {},
        std::vector<std::string> details = {})
      : std::runtime_error(message),
        code_(code),
        context_(std::move(context)),
        details_(std::move(details)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::map<std::string, std::string>& context() const noexcept { return context_; }
  // One entry per violation for validation failures.
  const std::vector<std::string>& details() const noexcept { return details_; }

 private:
  ErrorCode code_;
  std::map<std::string, std::string> context_;
  std::vector<std::string> details_;
};

}  // namespace ergopt
