#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace idt {

enum class ErrorKind {
  InvalidArgument,
  InsufficientData,
  OutOfRange,
  OutOfDomain,
  QuadratureFailure,
  DegenerateDisplacements,
  SingularTemperature,
  FitFailure,
  TrainingFailure,
  Divergence,
  UndefinedCorrelation,
  MeshError,
  SolverDivergence,
  TuningConflict,
  DegenerateStrain,
  IngestionError,
  DependencyError,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so that
/// callers (the CLI in particular) can map it onto an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace idt
