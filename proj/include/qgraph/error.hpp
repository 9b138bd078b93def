#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qgraph {

enum class ErrorCode {
  InvalidParams,
  DuplicateEdge,
  SelfLoop,
  Disconnected,
  VertexOutOfRange,
  NonPositiveLength,
  LengthCountMismatch,
  AllDegreeTwo,
  NonSimpleResult,
  NotRepresentable,
  StepTooLarge,
  TopologyMismatch,
  MuOutOfRange,
  ConvergenceFailure,
  MaxIterations,
  SingularShift,
  NearSingularEdge,
  SingularIterate,
  NotSingular,
  NonVertexLambda,
  NotNullvector,
  OutOfRange,
  Io,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// NearSingularEdge carries the offending edge index.
class NearSingularEdgeError : public Error {
 public:
  NearSingularEdgeError(int edge, double z);

  [[nodiscard]] int edge() const noexcept { return edge_; }

 private:
  int edge_;
};

}  // namespace qgraph
