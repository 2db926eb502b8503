#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "meclab/ad/tensor.hpp"
#include "meclab/mec/types.hpp"
#include "meclab/rng.hpp"

namespace meclab::marl {

struct Transition {
  std::vector<std::vector<double>> obs;       // per agent, augmented
  std::vector<std::array<double, mec::kActionDim>> actions;
  double reward = 0.0;
  std::vector<std::vector<double>> obs_next;
  std::vector<double> state;
  std::vector<double> state_next;
};

// Bounded ring with a uniform seeded sampler.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {}

  void push(Transition t);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& at(std::size_t i) const { return items_.at(i); }

  std::vector<std::size_t> sample_indices(std::size_t batch,
                                          RandomStream& rng) const;

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::vector<Transition> items_;
};

// Minibatch collated into per-agent matrices.
struct Batch {
  ad::Tensor state;                   // B x S
  ad::Tensor state_next;              // B x S
  std::vector<ad::Tensor> obs;        // per agent, B x O
  std::vector<ad::Tensor> obs_next;   // per agent, B x O
  std::vector<ad::Tensor> actions;    // per agent, B x kActionDim
  std::vector<double> rewards;        // B
  std::size_t size() const { return rewards.size(); }
};

Batch collate(const ReplayBuffer& buffer,
              const std::vector<std::size_t>& indices);

}  // namespace meclab::marl
