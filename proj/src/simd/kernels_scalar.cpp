#include "meclab/simd/kernels.hpp"

namespace meclab::simd {
namespace {

void add_s(double* dst, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] + b[i];
}

void sub_s(double* dst, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] - b[i];
}

void mul_s(double* dst, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] * b[i];
}

void mul_acc_s(double* dst, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += a[i] * b[i];
}

void scale_s(double* dst, const double* a, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = s * a[i];
}

void axpy_s(double* dst, double s, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += s * x[i];
}

double dot_s(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_s(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

void relu_s(double* dst, const double* a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] > 0.0 ? a[i] : 0.0;
}

void relu_grad_acc_s(double* dst, const double* pre, const double* g,
                     std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (pre[i] > 0.0) dst[i] += g[i];
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table = {add_s,  sub_s, mul_s,  mul_acc_s,
                                    scale_s, axpy_s, dot_s, sum_s,
                                    relu_s,  relu_grad_acc_s};
  return table;
}

}  // namespace meclab::simd
