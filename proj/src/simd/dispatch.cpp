#include <stdexcept>
#include <string>

#include "meclab/simd/kernels.hpp"

namespace meclab::simd {

const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

namespace {

bool cpu_has_avx2() {
#if (defined(__x86_64__) || defined(_M_X64)) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable*& active_table_slot() {
  static const KernelTable* table = kernels_for(detect_best_isa());
  return table;
}

Isa& active_isa_slot() {
  static Isa isa = detect_best_isa();
  return isa;
}

}  // namespace

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

const KernelTable* kernels_for(Isa isa) {
  switch (isa) {
    case Isa::scalar: return &scalar_kernels();
    case Isa::avx2: return cpu_has_avx2() ? avx2_kernels() : nullptr;
    case Isa::neon: return neon_kernels();
  }
  return nullptr;
}

Isa detect_best_isa() {
  if (cpu_has_avx2() && avx2_kernels() != nullptr) return Isa::avx2;
  if (neon_kernels() != nullptr) return Isa::neon;
  return Isa::scalar;
}

const KernelTable& active_kernels() { return *active_table_slot(); }

Isa active_isa() { return active_isa_slot(); }

void force_isa(Isa isa) {
  const KernelTable* table = kernels_for(isa);
  if (table == nullptr) {
    throw std::invalid_argument(std::string("isa not available: ") +
                                isa_name(isa));
  }
  active_table_slot() = table;
  active_isa_slot() = isa;
}

}  // namespace meclab::simd
