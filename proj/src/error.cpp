#include "ksparse/error.hpp"

namespace ksparse {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::LoopEdge: return "LoopEdge";
    case ErrorCode::NonpositiveMeasure: return "NonpositiveMeasure";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::SizeCapExceeded: return "SizeCapExceeded";
    case ErrorCode::NonpositiveParameter: return "NonpositiveParameter";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::OverlappingBalls: return "OverlappingBalls";
    case ErrorCode::PatternExceedsWindow: return "PatternExceedsWindow";
    case ErrorCode::MissingBoundaryData: return "MissingBoundaryData";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::DegenerateAnnulus: return "DegenerateAnnulus";
    case ErrorCode::MarginViolation: return "MarginViolation";
    case ErrorCode::NoAnnulusFound: return "NoAnnulusFound";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::DominationFailure: return "DominationFailure";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownFamily: return "UnknownFamily";
  }
  return "Unknown";
}

}  // namespace ksparse
