#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace meclab::ad {

// Dense row-major matrix of doubles. Scalars are 1x1, row vectors 1xN.
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), v_(rows * cols, fill) {}

  static Tensor scalar(double value) {
    Tensor t(1, 1);
    t.v_[0] = value;
    return t;
  }

  static Tensor from(std::size_t rows, std::size_t cols,
                     std::vector<double> values) {
    if (values.size() != rows * cols) {
      throw std::invalid_argument("Tensor::from: value count != rows*cols");
    }
    Tensor t;
    t.rows_ = rows;
    t.cols_ = cols;
    t.v_ = std::move(values);
    return t;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return v_.size(); }
  bool same_shape(const Tensor& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }

  double& at(std::size_t r, std::size_t c) { return v_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return v_[r * cols_ + c]; }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  double* row(std::size_t r) { return v_.data() + r * cols_; }
  const double* row(std::size_t r) const { return v_.data() + r * cols_; }

  double item() const {
    if (size() != 1) throw std::logic_error("Tensor::item: not a scalar");
    return v_[0];
  }

  void fill(double value) { v_.assign(v_.size(), value); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> v_;
};

// C = A * B
Tensor matmul(const Tensor& a, const Tensor& b);
// C = A * B^T
Tensor matmul_nt(const Tensor& a, const Tensor& b);
// C = A^T * B
Tensor matmul_tn(const Tensor& a, const Tensor& b);

}  // namespace meclab::ad
