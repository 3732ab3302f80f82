#include <cmath>
#include <numbers>
#include <string>

#include "idt/error.hpp"
#include "idt/material.hpp"

namespace idt::material {

void ComplexModulusRecord::validate() const {
  require(std::isfinite(temperature), ErrorKind::InvalidArgument, "temperature must be finite");
  require(frequency > 0.0 && std::isfinite(frequency), ErrorKind::InvalidArgument, "frequency must be positive");
  require(magnitude > 0.0 && std::isfinite(magnitude), ErrorKind::InvalidArgument, "magnitude must be positive");
  if (phase_deg) {
    require(*phase_deg >= 0.0 && *phase_deg <= 90.0, ErrorKind::InvalidArgument,
            "phase angle " + std::to_string(*phase_deg) + " deg is outside [0, 90]");
  }
}

namespace {
double phase_rad(const ComplexModulusRecord& record) {
  record.validate();
  require(record.phase_deg.has_value(), ErrorKind::InvalidArgument, "record has no phase angle");
  return *record.phase_deg * std::numbers::pi / 180.0;
}
}  // namespace

double storage_modulus(const ComplexModulusRecord& record) {
  return record.magnitude * std::cos(phase_rad(record));
}

double loss_modulus(const ComplexModulusRecord& record) {
  return record.magnitude * std::sin(phase_rad(record));
}

}  // namespace idt::material
