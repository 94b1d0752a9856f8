#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pcgraph {

enum class ErrorCode {
  NonZeroDiagonal,
  NonFinite,
  TooFewNodes,
  DimensionMismatch,
  NotSPD,
  SingularModel,
  UnstableGraph,
  InvalidQuadratic,
  SingularSystem,
  DegenerateGeometry,
  ZeroTargetEnergy,
  ZeroTrueGraph,
  EmptyPartition,
  InvalidArgument,
  Io,
  Parse,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. The code identifies the contract that
/// was violated; the message names the offending index, file or value.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pcgraph
