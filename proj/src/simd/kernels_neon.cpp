// NEON variants of the kernel table, compiled only on AArch64 where the
// float64x2 ops are baseline.

#include "meclab/simd/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace meclab::simd {
namespace {

void add_v(double* dst, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(dst + i, vaddq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  }
  for (; i < n; ++i) dst[i] = a[i] + b[i];
}

void sub_v(double* dst, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(dst + i, vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  }
  for (; i < n; ++i) dst[i] = a[i] - b[i];
}

void mul_v(double* dst, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(dst + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  }
  for (; i < n; ++i) dst[i] = a[i] * b[i];
}

void mul_acc_v(double* dst, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t acc = vld1q_f64(dst + i);
    acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
    vst1q_f64(dst + i, acc);
  }
  for (; i < n; ++i) dst[i] += a[i] * b[i];
}

void scale_v(double* dst, const double* a, double s, std::size_t n) {
  const float64x2_t sv = vdupq_n_f64(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(dst + i, vmulq_f64(sv, vld1q_f64(a + i)));
  }
  for (; i < n; ++i) dst[i] = s * a[i];
}

void axpy_v(double* dst, double s, const double* x, std::size_t n) {
  const float64x2_t sv = vdupq_n_f64(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t acc = vld1q_f64(dst + i);
    acc = vfmaq_f64(acc, sv, vld1q_f64(x + i));
    vst1q_f64(dst + i, acc);
  }
  for (; i < n; ++i) dst[i] += s * x[i];
}

double dot_v(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += a[i] * b[i];
  return vaddvq_f64(acc) + tail;
}

double sum_v(const double* a, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vaddq_f64(acc, vld1q_f64(a + i));
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += a[i];
  return vaddvq_f64(acc) + tail;
}

void relu_v(double* dst, const double* a, std::size_t n) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(dst + i, vmaxq_f64(vld1q_f64(a + i), zero));
  }
  for (; i < n; ++i) dst[i] = a[i] > 0.0 ? a[i] : 0.0;
}

void relu_grad_acc_v(double* dst, const double* pre, const double* g,
                     std::size_t n) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    uint64x2_t mask = vcgtq_f64(vld1q_f64(pre + i), zero);
    float64x2_t gated = vreinterpretq_f64_u64(
        vandq_u64(mask, vreinterpretq_u64_f64(vld1q_f64(g + i))));
    vst1q_f64(dst + i, vaddq_f64(vld1q_f64(dst + i), gated));
  }
  for (; i < n; ++i) {
    if (pre[i] > 0.0) dst[i] += g[i];
  }
}

}  // namespace

const KernelTable* neon_kernels() {
  static const KernelTable table = {add_v,  sub_v, mul_v,  mul_acc_v,
                                    scale_v, axpy_v, dot_v, sum_v,
                                    relu_v,  relu_grad_acc_v};
  return &table;
}

}  // namespace meclab::simd

#else

namespace meclab::simd {
const KernelTable* neon_kernels() { return nullptr; }
}  // namespace meclab::simd

#endif
