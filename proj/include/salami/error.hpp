#pragma once

#include <stdexcept>
#include <string>

namespace salami {

enum class ErrorCode {
  DuplicateVertex,
  AsymmetricWeight,
  NonpositiveMeasure,
  NegativeWeight,
  SelfLoopWeight,
  UnknownVertex,
  MissingValue,
  MissingLength,
  DisconnectedQuery,
  SupportTouchesBoundary,
  KTouchesBoundary,
  WindowTooSmall,
  BallTouchesBoundary,
  NotAdjacentMetric,
  InfeasibleMarginals,
  NotATree,
  NotAdjacent,
  NotLatticeLike,
  EpsilonTooLarge,
  NotLipschitz,
  UnreliableDistance,
  NotLipschitzOnK,
  WindowBufferTooSmall,
  HypothesisFails,
  NoConvergence,
  WeightBelowEpsilon,
  NoJumpEdges,
  NotBoundedGeometry,
  NonpositiveHarmonic,
  DegenerateTestFunction,
  NormalizationFailed,
  NotInH0,
  BandTouchesBoundary,
  InvalidPartition,
  DisconnectedGraph,
  RadiusTooSmall,
  BadSpec,
  IoError,
  ParseError,
  UnknownLemmaId,
};

const char* error_code_name(ErrorCode c);

/// Library error. Every failure mode named in the operation contracts maps to
/// a distinct ErrorCode so callers (and tests) can dispatch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace salami
