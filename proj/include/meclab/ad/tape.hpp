#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "meclab/ad/params.hpp"
#include "meclab/ad/tensor.hpp"
#include "meclab/rng.hpp"

namespace meclab::ad {

class Tape;

// Handle to a node on a Tape. Cheap to copy; valid while the tape lives.
class Value {
 public:
  Value() = default;
  const Tensor& val() const;
  std::size_t rows() const { return val().rows(); }
  std::size_t cols() const { return val().cols(); }
  double item() const { return val().item(); }

 private:
  friend class Tape;
  Value(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}
  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

// Append-only computation tape. Creation order is a valid topological order,
// so backward() is a single reverse sweep that visits each node exactly once.
// Gradients of shared subexpressions accumulate.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Leaves. Constants block gradient flow into their inputs (detach).
  Value constant(Tensor t);
  Value scalar(double v);
  Value param(ParamSet& params, std::string_view name);

  Value add(Value a, Value b);       // same shape
  Value add_row(Value a, Value row); // row vector broadcast over a's rows
  Value sub(Value a, Value b);
  Value mul(Value a, Value b);       // elementwise
  Value scale(Value a, double s);
  Value matmul(Value a, Value b);
  Value relu(Value a);
  Value sigmoid(Value a);
  Value tanh(Value a);
  Value softmax_rows(Value a);
  // Row-wise Gumbel-Softmax. hard=true emits the exact one-hot of the soft
  // argmax on the forward path while gradients follow the soft sample
  // (straight-through). rng=nullptr means zero noise.
  Value gumbel_softmax(Value logits, double temperature, bool hard,
                       RandomStream* rng);
  Value concat_cols(Value a, Value b);
  Value slice_cols(Value a, std::size_t first, std::size_t count);
  Value sum(Value a);   // scalar
  Value mean(Value a);  // scalar
  Value mse(Value a, Value b);  // mean squared difference, scalar

  // Reverse sweep from a scalar loss. Parameter gradients are accumulated
  // into their ParamSet entries.
  void backward(Value loss);

  const Tensor& value_of(std::size_t id) const { return nodes_[id].value; }
  const Tensor& grad_of(Value v) const;
  std::size_t node_count() const { return nodes_.size(); }

 private:
  enum class Op {
    constant,
    param,
    add,
    add_row,
    sub,
    mul,
    scale,
    matmul,
    relu,
    sigmoid,
    tanh_op,
    softmax,
    gumbel,
    concat_cols,
    slice_cols,
    sum,
    mean,
    mse,
  };

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  struct Node {
    Op op;
    Tensor value;
    Tensor grad;
    std::size_t a = npos;
    std::size_t b = npos;
    double aux = 0.0;
    std::size_t offset = 0;
    Tensor saved;  // gumbel: the soft sample
    ParamEntry* param = nullptr;
  };

  Value push(Node node);
  Node& node(Value v) { return nodes_[v.id_]; }
  const Tensor& val(Value v) const { return nodes_[v.id_].value; }

  std::vector<Node> nodes_;
  bool ran_backward_ = false;
};

}  // namespace meclab::ad
