#pragma once

#include <stdexcept>
#include <string>

namespace bubbletree {

enum class ErrorCode {
  InvalidChart,
  VanishedMetric,
  GridTooCoarse,
  RegionOutOfChart,
  CircleOutOfChart,
  OriginInDomain,
  SolverDivergence,
  NotRotationallySymmetric,
  RadiusUnresolvable,
  CountBoundViolated,
  WindowOutOfChart,
  NoCrossing,
  PreconditionLengthTooLarge,
  FilterAboveThreshold,
  WindowExceedsSource,
  NoConcentration,
  BudgetViolated,
  GhostLawViolated,
  MalformedTree,
  ThinViolation,
  ChartTooSmall,
  CriticalPointInChart,
  FunctionalBoundExceeded,
  InvalidSequence,
  ParseError,
  ConfigError,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bubbletree
