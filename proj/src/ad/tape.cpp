#include "meclab/ad/tape.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "meclab/simd/kernels.hpp"

namespace meclab::ad {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

std::size_t row_argmax(const double* row, std::size_t n) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < n; ++j) {
    if (row[j] > row[best]) best = j;
  }
  return best;
}

}  // namespace

const Tensor& Value::val() const {
  if (tape_ == nullptr) throw std::logic_error("Value: empty handle");
  return tape_->value_of(id_);
}

Value Tape::push(Node node) {
  nodes_.push_back(std::move(node));
  return Value(this, nodes_.size() - 1);
}

Value Tape::constant(Tensor t) {
  Node n;
  n.op = Op::constant;
  n.value = std::move(t);
  return push(std::move(n));
}

Value Tape::scalar(double v) { return constant(Tensor::scalar(v)); }

Value Tape::param(ParamSet& params, std::string_view name) {
  Node n;
  n.op = Op::param;
  n.param = &params.entry(name);
  n.value = n.param->value;
  return push(std::move(n));
}

Value Tape::add(Value a, Value b) {
  require(val(a).same_shape(val(b)), "add: shape mismatch");
  Node n;
  n.op = Op::add;
  n.a = a.id_;
  n.b = b.id_;
  n.value = Tensor(val(a).rows(), val(a).cols());
  simd::active_kernels().add(n.value.data(), val(a).data(), val(b).data(),
                             n.value.size());
  return push(std::move(n));
}

Value Tape::add_row(Value a, Value row) {
  require(val(row).rows() == 1 && val(row).cols() == val(a).cols(),
          "add_row: row vector shape mismatch");
  Node n;
  n.op = Op::add_row;
  n.a = a.id_;
  n.b = row.id_;
  n.value = Tensor(val(a).rows(), val(a).cols());
  const auto& k = simd::active_kernels();
  for (std::size_t r = 0; r < n.value.rows(); ++r) {
    k.add(n.value.row(r), val(a).row(r), val(row).data(), n.value.cols());
  }
  return push(std::move(n));
}

Value Tape::sub(Value a, Value b) {
  require(val(a).same_shape(val(b)), "sub: shape mismatch");
  Node n;
  n.op = Op::sub;
  n.a = a.id_;
  n.b = b.id_;
  n.value = Tensor(val(a).rows(), val(a).cols());
  simd::active_kernels().sub(n.value.data(), val(a).data(), val(b).data(),
                             n.value.size());
  return push(std::move(n));
}

Value Tape::mul(Value a, Value b) {
  require(val(a).same_shape(val(b)), "mul: shape mismatch");
  Node n;
  n.op = Op::mul;
  n.a = a.id_;
  n.b = b.id_;
  n.value = Tensor(val(a).rows(), val(a).cols());
  simd::active_kernels().mul(n.value.data(), val(a).data(), val(b).data(),
                             n.value.size());
  return push(std::move(n));
}

Value Tape::scale(Value a, double s) {
  Node n;
  n.op = Op::scale;
  n.a = a.id_;
  n.aux = s;
  n.value = Tensor(val(a).rows(), val(a).cols());
  simd::active_kernels().scale(n.value.data(), val(a).data(), s,
                               n.value.size());
  return push(std::move(n));
}

Value Tape::matmul(Value a, Value b) {
  require(val(a).cols() == val(b).rows(), "matmul: inner dimensions differ");
  Node n;
  n.op = Op::matmul;
  n.a = a.id_;
  n.b = b.id_;
  n.value = ad::matmul(val(a), val(b));
  return push(std::move(n));
}

Value Tape::relu(Value a) {
  Node n;
  n.op = Op::relu;
  n.a = a.id_;
  n.value = Tensor(val(a).rows(), val(a).cols());
  simd::active_kernels().relu(n.value.data(), val(a).data(), n.value.size());
  return push(std::move(n));
}

Value Tape::sigmoid(Value a) {
  Node n;
  n.op = Op::sigmoid;
  n.a = a.id_;
  n.value = Tensor(val(a).rows(), val(a).cols());
  const double* x = val(a).data();
  double* y = n.value.data();
  for (std::size_t i = 0; i < n.value.size(); ++i) {
    y[i] = 1.0 / (1.0 + std::exp(-x[i]));
  }
  return push(std::move(n));
}

Value Tape::tanh(Value a) {
  Node n;
  n.op = Op::tanh_op;
  n.a = a.id_;
  n.value = Tensor(val(a).rows(), val(a).cols());
  const double* x = val(a).data();
  double* y = n.value.data();
  for (std::size_t i = 0; i < n.value.size(); ++i) y[i] = std::tanh(x[i]);
  return push(std::move(n));
}

namespace {

// Numerically stable row softmax into dst.
void softmax_row(double* dst, const double* src, std::size_t n) {
  double mx = src[0];
  for (std::size_t j = 1; j < n; ++j) mx = std::max(mx, src[j]);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    dst[j] = std::exp(src[j] - mx);
    total += dst[j];
  }
  for (std::size_t j = 0; j < n; ++j) dst[j] /= total;
}

}  // namespace

Value Tape::softmax_rows(Value a) {
  Node n;
  n.op = Op::softmax;
  n.a = a.id_;
  n.value = Tensor(val(a).rows(), val(a).cols());
  for (std::size_t r = 0; r < n.value.rows(); ++r) {
    softmax_row(n.value.row(r), val(a).row(r), n.value.cols());
  }
  return push(std::move(n));
}

Value Tape::gumbel_softmax(Value logits, double temperature, bool hard,
                           RandomStream* rng) {
  if (!(temperature > 0.0)) {
    throw std::domain_error("gumbel_softmax: temperature must be > 0");
  }
  const Tensor& lg = val(logits);
  Tensor z(lg.rows(), lg.cols());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double noise = rng != nullptr ? rng->gumbel() : 0.0;
    z.data()[i] = (lg.data()[i] + noise) / temperature;
  }
  Tensor soft(lg.rows(), lg.cols());
  for (std::size_t r = 0; r < soft.rows(); ++r) {
    softmax_row(soft.row(r), z.row(r), soft.cols());
  }
  Node n;
  n.op = Op::gumbel;
  n.a = logits.id_;
  n.aux = temperature;
  if (hard) {
    n.value = Tensor(lg.rows(), lg.cols());
    for (std::size_t r = 0; r < lg.rows(); ++r) {
      n.value.at(r, row_argmax(soft.row(r), soft.cols())) = 1.0;
    }
  } else {
    n.value = soft;
  }
  n.saved = std::move(soft);
  return push(std::move(n));
}

Value Tape::concat_cols(Value a, Value b) {
  require(val(a).rows() == val(b).rows(), "concat_cols: row count differs");
  Node n;
  n.op = Op::concat_cols;
  n.a = a.id_;
  n.b = b.id_;
  n.offset = val(a).cols();
  n.value = Tensor(val(a).rows(), val(a).cols() + val(b).cols());
  for (std::size_t r = 0; r < n.value.rows(); ++r) {
    std::memcpy(n.value.row(r), val(a).row(r), val(a).cols() * sizeof(double));
    std::memcpy(n.value.row(r) + val(a).cols(), val(b).row(r),
                val(b).cols() * sizeof(double));
  }
  return push(std::move(n));
}

Value Tape::slice_cols(Value a, std::size_t first, std::size_t count) {
  require(first + count <= val(a).cols(), "slice_cols: out of range");
  Node n;
  n.op = Op::slice_cols;
  n.a = a.id_;
  n.offset = first;
  n.value = Tensor(val(a).rows(), count);
  for (std::size_t r = 0; r < n.value.rows(); ++r) {
    std::memcpy(n.value.row(r), val(a).row(r) + first, count * sizeof(double));
  }
  return push(std::move(n));
}

Value Tape::sum(Value a) {
  Node n;
  n.op = Op::sum;
  n.a = a.id_;
  n.value =
      Tensor::scalar(simd::active_kernels().sum(val(a).data(), val(a).size()));
  return push(std::move(n));
}

Value Tape::mean(Value a) {
  Node n;
  n.op = Op::mean;
  n.a = a.id_;
  n.value = Tensor::scalar(
      simd::active_kernels().sum(val(a).data(), val(a).size()) /
      static_cast<double>(val(a).size()));
  return push(std::move(n));
}

Value Tape::mse(Value a, Value b) {
  require(val(a).same_shape(val(b)), "mse: shape mismatch");
  Node n;
  n.op = Op::mse;
  n.a = a.id_;
  n.b = b.id_;
  double acc = 0.0;
  const double* pa = val(a).data();
  const double* pb = val(b).data();
  for (std::size_t i = 0; i < val(a).size(); ++i) {
    const double d = pa[i] - pb[i];
    acc += d * d;
  }
  n.value = Tensor::scalar(acc / static_cast<double>(val(a).size()));
  return push(std::move(n));
}

const Tensor& Tape::grad_of(Value v) const {
  if (!ran_backward_) throw std::logic_error("grad_of: backward not run");
  return nodes_[v.id_].grad;
}

void Tape::backward(Value loss) {
  if (loss.tape_ != this) throw std::logic_error("backward: foreign value");
  if (val(loss).size() != 1) {
    throw std::logic_error("backward: loss must be scalar");
  }
  const auto& k = simd::active_kernels();
  for (auto& n : nodes_) {
    n.grad = Tensor(n.value.rows(), n.value.cols());
  }
  nodes_[loss.id_].grad.data()[0] = 1.0;

  for (std::size_t idx = nodes_.size(); idx-- > 0;) {
    Node& n = nodes_[idx];
    const double* g = n.grad.data();
    const std::size_t sz = n.grad.size();
    switch (n.op) {
      case Op::constant:
        break;
      case Op::param:
        k.add(n.param->grad.data(), n.param->grad.data(), g,
              n.param->grad.size());
        break;
      case Op::add:
        k.axpy(nodes_[n.a].grad.data(), 1.0, g, sz);
        k.axpy(nodes_[n.b].grad.data(), 1.0, g, sz);
        break;
      case Op::add_row: {
        k.axpy(nodes_[n.a].grad.data(), 1.0, g, sz);
        Tensor& gb = nodes_[n.b].grad;
        for (std::size_t r = 0; r < n.grad.rows(); ++r) {
          k.axpy(gb.data(), 1.0, n.grad.row(r), n.grad.cols());
        }
        break;
      }
      case Op::sub:
        k.axpy(nodes_[n.a].grad.data(), 1.0, g, sz);
        k.axpy(nodes_[n.b].grad.data(), -1.0, g, sz);
        break;
      case Op::mul:
        k.mul_acc(nodes_[n.a].grad.data(), g, nodes_[n.b].value.data(), sz);
        k.mul_acc(nodes_[n.b].grad.data(), g, nodes_[n.a].value.data(), sz);
        break;
      case Op::scale:
        k.axpy(nodes_[n.a].grad.data(), n.aux, g, sz);
        break;
      case Op::matmul: {
        const Tensor ga = matmul_nt(n.grad, nodes_[n.b].value);
        const Tensor gb = matmul_tn(nodes_[n.a].value, n.grad);
        k.axpy(nodes_[n.a].grad.data(), 1.0, ga.data(), ga.size());
        k.axpy(nodes_[n.b].grad.data(), 1.0, gb.data(), gb.size());
        break;
      }
      case Op::relu:
        k.relu_grad_acc(nodes_[n.a].grad.data(), nodes_[n.a].value.data(), g,
                        sz);
        break;
      case Op::sigmoid: {
        double* ga = nodes_[n.a].grad.data();
        const double* y = n.value.data();
        for (std::size_t i = 0; i < sz; ++i) {
          ga[i] += g[i] * y[i] * (1.0 - y[i]);
        }
        break;
      }
      case Op::tanh_op: {
        double* ga = nodes_[n.a].grad.data();
        const double* y = n.value.data();
        for (std::size_t i = 0; i < sz; ++i) {
          ga[i] += g[i] * (1.0 - y[i] * y[i]);
        }
        break;
      }
      case Op::softmax:
      case Op::gumbel: {
        const Tensor& soft = n.op == Op::gumbel ? n.saved : n.value;
        const double inv_t = n.op == Op::gumbel ? 1.0 / n.aux : 1.0;
        Tensor& ga = nodes_[n.a].grad;
        for (std::size_t r = 0; r < n.grad.rows(); ++r) {
          const double* grow = n.grad.row(r);
          const double* yrow = soft.row(r);
          const double dotgy = k.dot(grow, yrow, n.grad.cols());
          double* garow = ga.row(r);
          for (std::size_t j = 0; j < n.grad.cols(); ++j) {
            garow[j] += inv_t * yrow[j] * (grow[j] - dotgy);
          }
        }
        break;
      }
      case Op::concat_cols: {
        Tensor& ga = nodes_[n.a].grad;
        Tensor& gb = nodes_[n.b].grad;
        for (std::size_t r = 0; r < n.grad.rows(); ++r) {
          k.axpy(ga.row(r), 1.0, n.grad.row(r), ga.cols());
          k.axpy(gb.row(r), 1.0, n.grad.row(r) + n.offset, gb.cols());
        }
        break;
      }
      case Op::slice_cols: {
        Tensor& ga = nodes_[n.a].grad;
        for (std::size_t r = 0; r < n.grad.rows(); ++r) {
          k.axpy(ga.row(r) + n.offset, 1.0, n.grad.row(r), n.grad.cols());
        }
        break;
      }
      case Op::sum: {
        Tensor& ga = nodes_[n.a].grad;
        const double gs = g[0];
        for (std::size_t i = 0; i < ga.size(); ++i) ga.data()[i] += gs;
        break;
      }
      case Op::mean: {
        Tensor& ga = nodes_[n.a].grad;
        const double gs = g[0] / static_cast<double>(ga.size());
        for (std::size_t i = 0; i < ga.size(); ++i) ga.data()[i] += gs;
        break;
      }
      case Op::mse: {
        Tensor& ga = nodes_[n.a].grad;
        Tensor& gb = nodes_[n.b].grad;
        const double* pa = nodes_[n.a].value.data();
        const double* pb = nodes_[n.b].value.data();
        const double gs = 2.0 * g[0] / static_cast<double>(ga.size());
        for (std::size_t i = 0; i < ga.size(); ++i) {
          const double d = gs * (pa[i] - pb[i]);
          ga.data()[i] += d;
          gb.data()[i] -= d;
        }
        break;
      }
    }
  }
  ran_backward_ = true;
}

}  // namespace meclab::ad
