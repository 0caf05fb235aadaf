#include "ergopt/error.hpp"

namespace ergopt {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NoCycle: return "NoCycle";
    case ErrorCode::NotTransitive: return "NotTransitive";
    case ErrorCode::NotStronglyConnected: return "NotStronglyConnected";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::InfeasibleR: return "InfeasibleR";
    case ErrorCode::NotInterior: return "NotInterior";
    case ErrorCode::MaxIters: return "MaxIters";
    case ErrorCode::DegenerateRotationSet: return "DegenerateRotationSet";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace ergopt
