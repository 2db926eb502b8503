#pragma once

#include <cstddef>

namespace meclab::simd {

// Instruction sets a kernel table can be built for. `scalar` is the
// reference implementation and is always available; the vector variants
// are selected at runtime when the CPU supports them.
enum class Isa { scalar, avx2, neon };

// Flat table of the data-parallel inner loops used by the tensor layer.
// All pointers may alias only as documented per entry; lengths are in
// elements of double.
struct KernelTable {
  void (*add)(double* dst, const double* a, const double* b, std::size_t n);
  void (*sub)(double* dst, const double* a, const double* b, std::size_t n);
  void (*mul)(double* dst, const double* a, const double* b, std::size_t n);
  // dst[i] += a[i] * b[i]
  void (*mul_acc)(double* dst, const double* a, const double* b,
                  std::size_t n);
  // dst[i] = s * a[i]
  void (*scale)(double* dst, const double* a, double s, std::size_t n);
  // dst[i] += s * x[i]
  void (*axpy)(double* dst, double s, const double* x, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* a, std::size_t n);
  // dst[i] = max(a[i], 0)
  void (*relu)(double* dst, const double* a, std::size_t n);
  // dst[i] += (pre[i] > 0) ? g[i] : 0
  void (*relu_grad_acc)(double* dst, const double* pre, const double* g,
                        std::size_t n);
};

const char* isa_name(Isa isa);

// Reference table; the oracle the vector variants are tested against.
const KernelTable& scalar_kernels();

// Table for a specific ISA, or nullptr when this build/CPU cannot run it.
const KernelTable* kernels_for(Isa isa);

// Widest ISA the running CPU supports.
Isa detect_best_isa();

// Table used by the tensor layer. Defaults to detect_best_isa() on first
// use; force_isa() overrides it (throws std::invalid_argument when the
// requested ISA is unavailable).
const KernelTable& active_kernels();
Isa active_isa();
void force_isa(Isa isa);

}  // namespace meclab::simd
