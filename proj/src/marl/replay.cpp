#include "meclab/marl/replay.hpp"

#include <stdexcept>

namespace meclab::marl {

void ReplayBuffer::push(Transition t) {
  if (items_.size() < capacity_) {
    items_.push_back(std::move(t));
  } else {
    items_[next_] = std::move(t);
  }
  next_ = (next_ + 1) % capacity_;
}

std::vector<std::size_t> ReplayBuffer::sample_indices(
    std::size_t batch, RandomStream& rng) const {
  if (items_.empty()) {
    throw std::logic_error("ReplayBuffer::sample_indices: buffer empty");
  }
  std::vector<std::size_t> idx(batch);
  for (auto& i : idx) i = rng.uniform_index(items_.size());
  return idx;
}

Batch collate(const ReplayBuffer& buffer,
              const std::vector<std::size_t>& indices) {
  if (indices.empty()) {
    throw std::invalid_argument("collate: empty index list");
  }
  const Transition& first = buffer.at(indices.front());
  const std::size_t agents = first.obs.size();
  const std::size_t obs_dim = first.obs.front().size();
  const std::size_t state_dim = first.state.size();
  const std::size_t b = indices.size();

  Batch batch;
  batch.state = ad::Tensor(b, state_dim);
  batch.state_next = ad::Tensor(b, state_dim);
  batch.obs.assign(agents, ad::Tensor(b, obs_dim));
  batch.obs_next.assign(agents, ad::Tensor(b, obs_dim));
  batch.actions.assign(agents, ad::Tensor(b, mec::kActionDim));
  batch.rewards.resize(b);

  for (std::size_t r = 0; r < b; ++r) {
    const Transition& t = buffer.at(indices[r]);
    batch.rewards[r] = t.reward;
    for (std::size_t j = 0; j < state_dim; ++j) {
      batch.state.at(r, j) = t.state[j];
      batch.state_next.at(r, j) = t.state_next[j];
    }
    for (std::size_t a = 0; a < agents; ++a) {
      for (std::size_t j = 0; j < obs_dim; ++j) {
        batch.obs[a].at(r, j) = t.obs[a][j];
        batch.obs_next[a].at(r, j) = t.obs_next[a][j];
      }
      for (std::size_t j = 0; j < mec::kActionDim; ++j) {
        batch.actions[a].at(r, j) = t.actions[a][j];
      }
    }
  }
  return batch;
}

}  // namespace meclab::marl
