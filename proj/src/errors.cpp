#include "cutofflab/errors.hpp"

namespace cutofflab {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::RowSumError: return "RowSumError";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::AsymmetricSupport: return "AsymmetricSupport";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::ToleranceUnreachable: return "ToleranceUnreachable";
    case ErrorCode::SolveFailed: return "SolveFailed";
    case ErrorCode::EigenFailed: return "EigenFailed";
    case ErrorCode::TooLargeForExact: return "TooLargeForExact";
    case ErrorCode::BracketFailed: return "BracketFailed";
    case ErrorCode::ZeroMassState: return "ZeroMassState";
    case ErrorCode::DegenerateThreshold: return "DegenerateThreshold";
    case ErrorCode::GenerationFailed: return "GenerationFailed";
  }
  return "Unknown";
}

bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::InvalidParams:
    case ErrorCode::RowSumError:
    case ErrorCode::NegativeEntry:
    case ErrorCode::AsymmetricSupport:
    case ErrorCode::NotIrreducible:
    case ErrorCode::NonFiniteValue:
    case ErrorCode::GenerationFailed:
      return true;
    default:
      return false;
  }
}

}  // namespace cutofflab
