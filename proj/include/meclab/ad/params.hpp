#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "meclab/ad/tensor.hpp"
#include "meclab/rng.hpp"

namespace meclab::ad {

struct ParamEntry {
  std::string name;
  Tensor value;
  Tensor grad;
  // optimizer moments, zero until the first optimizer step
  Tensor m1;
  Tensor m2;
};

// Named parameter collection with stable insertion order. Iteration order is
// the insertion order, which keeps optimizer and soft-update sweeps
// deterministic.
class ParamSet {
 public:
  Tensor& add(std::string name, Tensor init);
  ParamEntry& entry(std::string_view name);
  const ParamEntry& entry(std::string_view name) const;
  bool contains(std::string_view name) const;

  std::vector<ParamEntry>& entries() { return entries_; }
  const std::vector<ParamEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  void zero_grads();
  std::size_t value_count() const;

 private:
  std::vector<ParamEntry> entries_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// Uniform fan-in init: U[-1/sqrt(fan_in), 1/sqrt(fan_in)].
Tensor fan_in_uniform(std::size_t rows, std::size_t cols, std::size_t fan_in,
                      RandomStream& rng);

// Adaptive-moment optimizer. Moments live inside the ParamSet; the optimizer
// carries the hyperparameters and the shared step counter.
class AdamOptimizer {
 public:
  explicit AdamOptimizer(double lr, double beta1 = 0.9, double beta2 = 0.999,
                         double epsilon = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(epsilon) {}

  // One bias-corrected update over every entry; clears gradients.
  void step(ParamSet& params);

  double learning_rate() const { return lr_; }
  void set_learning_rate(double lr) { lr_ = lr; }
  long step_count() const { return t_; }

 private:
  double lr_;
  double beta1_;
  double beta2_;
  double eps_;
  long t_ = 0;
};

// target <- tau * online + (1 - tau) * target, entrywise by name order.
void soft_update(ParamSet& target, const ParamSet& online, double tau);

// Deep copy used to spawn target networks.
ParamSet clone_params(const ParamSet& src);

}  // namespace meclab::ad
