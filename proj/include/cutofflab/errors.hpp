#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cutofflab {

enum class ErrorCode {
  ParseError,
  InvalidParams,
  RowSumError,
  NegativeEntry,
  AsymmetricSupport,
  NotIrreducible,
  NonFiniteValue,
  ToleranceUnreachable,
  SolveFailed,
  EigenFailed,
  TooLargeForExact,
  BracketFailed,
  ZeroMassState,
  DegenerateThreshold,
  GenerationFailed,
};

std::string_view error_name(ErrorCode code);

/// True for errors caused by bad user input (files, parameters, invalid
/// matrices); false for numerical failures inside the engine.
bool is_input_error(ErrorCode code);

class LabError : public std::runtime_error {
 public:
  LabError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cutofflab
