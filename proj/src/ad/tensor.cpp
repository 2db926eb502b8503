#include "meclab/ad/tensor.hpp"

#include "meclab/simd/kernels.hpp"

namespace meclab::ad {

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matmul: inner dimensions differ");
  }
  const auto& k = simd::active_kernels();
  Tensor c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* crow = c.row(i);
    for (std::size_t p = 0; p < a.cols(); ++p) {
      k.axpy(crow, a.at(i, p), b.row(p), b.cols());
    }
  }
  return c;
}

Tensor matmul_nt(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.cols()) {
    throw std::invalid_argument("matmul_nt: inner dimensions differ");
  }
  const auto& k = simd::active_kernels();
  Tensor c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.rows(); ++j) {
      c.at(i, j) = k.dot(a.row(i), b.row(j), a.cols());
    }
  }
  return c;
}

Tensor matmul_tn(const Tensor& a, const Tensor& b) {
  if (a.rows() != b.rows()) {
    throw std::invalid_argument("matmul_tn: inner dimensions differ");
  }
  const auto& k = simd::active_kernels();
  Tensor c(a.cols(), b.cols());
  for (std::size_t p = 0; p < a.rows(); ++p) {
    const double* brow = b.row(p);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      k.axpy(c.row(i), a.at(p, i), brow, b.cols());
    }
  }
  return c;
}

}  // namespace meclab::ad
