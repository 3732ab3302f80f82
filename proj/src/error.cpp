#include "idt/error.hpp"

namespace idt {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::OutOfRange: return "out-of-range";
    case ErrorKind::OutOfDomain: return "out-of-domain";
    case ErrorKind::QuadratureFailure: return "quadrature-failure";
    case ErrorKind::DegenerateDisplacements: return "degenerate-displacements";
    case ErrorKind::SingularTemperature: return "singular-temperature";
    case ErrorKind::FitFailure: return "fit-failure";
    case ErrorKind::TrainingFailure: return "training-failure";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::UndefinedCorrelation: return "undefined-correlation";
    case ErrorKind::MeshError: return "mesh-error";
    case ErrorKind::SolverDivergence: return "solver-divergence";
    case ErrorKind::TuningConflict: return "tuning-conflict";
    case ErrorKind::DegenerateStrain: return "degenerate-strain";
    case ErrorKind::IngestionError: return "ingestion-error";
    case ErrorKind::DependencyError: return "dependency-error";
    case ErrorKind::ConfigError: return "config-error";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace idt
