#pragma once

// Data-parallel inner loops used by the FE history update, the batched ANN
// forward pass and the sinusoid regression.  Each kernel has a scalar
// reference implementation; vector variants are selected once at runtime.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace idt::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa);

struct KernelTable {
  Isa isa;
  // y[i] = a * x[i] + b * y[i]
  void (*axpby)(double a, const double* x, double b, double* y, std::size_t n);
  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // sum_i x[i]
  double (*sum)(const double* x, std::size_t n);
  // out[i] = a[i] * b[i]
  void (*multiply)(const double* a, const double* b, double* out, std::size_t n);
};

/// Kernels for the best ISA supported by the running CPU.  Setting the
/// environment variable IDT_SIMD=scalar forces the reference kernels.
const KernelTable& active();

/// Kernels for a specific ISA, or nullptr when it was not compiled in or the
/// CPU lacks it.
const KernelTable* table_for(Isa isa);

std::vector<Isa> available();


// Convenience wrappers over active().
inline void axpby(double a, std::span<const double> x, double b, std::span<double> y) {
  active().axpby(a, x.data(), b, y.data(), y.size());
}
inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}
inline double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }

}  // namespace idt::simd
