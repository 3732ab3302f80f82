#include <cstdlib>
#include <cstring>

#include "idt/simd/kernels.hpp"

namespace idt::simd {

namespace scalar {
const KernelTable& table();
}
#if defined(IDT_HAVE_AVX2)
namespace avx2 {
const KernelTable& table();
}
#endif
#if defined(IDT_HAVE_NEON)
namespace neon {
const KernelTable& table();
}
#endif

namespace {

bool cpu_has_avx2() {
#if defined(IDT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& select() {
  const char* forced = std::getenv("IDT_SIMD");
  if (forced != nullptr && std::strcmp(forced, "scalar") == 0) return scalar::table();
#if defined(IDT_HAVE_AVX2)
  if (cpu_has_avx2()) return avx2::table();
#endif
#if defined(IDT_HAVE_NEON)
  return neon::table();
#endif
  return scalar::table();
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

const KernelTable& active() {
  static const KernelTable& chosen = select();
  return chosen;
}

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return &scalar::table();
    case Isa::Avx2:
#if defined(IDT_HAVE_AVX2)
      if (cpu_has_avx2()) return &avx2::table();
#endif
      return nullptr;
    case Isa::Neon:
#if defined(IDT_HAVE_NEON)
      return &neon::table();
#endif
      return nullptr;
  }
  return nullptr;
}

std::vector<Isa> available() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
    if (table_for(isa) != nullptr) out.push_back(isa);
  }
  return out;
}

}  // namespace idt::simd
