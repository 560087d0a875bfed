#include "bubbletree/error.hpp"

namespace bubbletree {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidChart: return "InvalidChart";
    case ErrorCode::VanishedMetric: return "VanishedMetric";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::RegionOutOfChart: return "RegionOutOfChart";
    case ErrorCode::CircleOutOfChart: return "CircleOutOfChart";
    case ErrorCode::OriginInDomain: return "OriginInDomain";
    case ErrorCode::SolverDivergence: return "SolverDivergence";
    case ErrorCode::NotRotationallySymmetric: return "NotRotationallySymmetric";
    case ErrorCode::RadiusUnresolvable: return "RadiusUnresolvable";
    case ErrorCode::CountBoundViolated: return "CountBoundViolated";
    case ErrorCode::WindowOutOfChart: return "WindowOutOfChart";
    case ErrorCode::NoCrossing: return "NoCrossing";
    case ErrorCode::PreconditionLengthTooLarge: return "PreconditionLengthTooLarge";
    case ErrorCode::FilterAboveThreshold: return "FilterAboveThreshold";
    case ErrorCode::WindowExceedsSource: return "WindowExceedsSource";
    case ErrorCode::NoConcentration: return "NoConcentration";
    case ErrorCode::BudgetViolated: return "BudgetViolated";
    case ErrorCode::GhostLawViolated: return "GhostLawViolated";
    case ErrorCode::MalformedTree: return "MalformedTree";
    case ErrorCode::ThinViolation: return "ThinViolation";
    case ErrorCode::ChartTooSmall: return "ChartTooSmall";
    case ErrorCode::CriticalPointInChart: return "CriticalPointInChart";
    case ErrorCode::FunctionalBoundExceeded: return "FunctionalBoundExceeded";
    case ErrorCode::InvalidSequence: return "InvalidSequence";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace bubbletree
