#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "meclab/ad/nn.hpp"
#include "meclab/ad/params.hpp"
#include "meclab/ad/tape.hpp"
#include "meclab/tgnn/graph.hpp"

namespace meclab::tgnn {

struct Forecast {
  ad::Tensor predicted;  // |V| x kForecastFeatures, clamped to [0,1]
  int horizon = 1;
};

// Forecast block handed to agent observations, flattened row-major in
// (server id, feature) order.
std::vector<double> augment_observation(const std::vector<double>& local_obs,
                                        const Forecast& forecast);

// Spatial-temporal state predictor: a recurrent encoding of the buffered
// node-feature history gates stacked graph layers over the newest snapshot;
// a two-layer perceptron head emits the next-step node states. All weights
// are shared across nodes, so the module works for any server count.
class StatePredictor {
 public:
  StatePredictor(std::size_t hidden, std::size_t layers, std::uint64_t seed);

  ad::ParamSet& params() { return params_; }
  const ad::ParamSet& params() const { return params_; }
  std::size_t hidden() const { return hidden_; }
  std::size_t layers() const { return layers_; }

  // Recurrent sweep over the buffered snapshots; returns the |V| x hidden
  // temporal code of the final step. Buffer must be non-empty.
  ad::Value temporal_encoding(ad::Tape& tape, const TemporalBuffer& buffer);

  // One propagation step: relu(A H Ws + Phi .* (H Wt)).
  ad::Value layer_forward(ad::Tape& tape, ad::Value h, ad::Value adjacency,
                          ad::Value phi, std::size_t layer);

  // Unclamped network output for the newest buffered snapshot. Requires a
  // full buffer.
  ad::Value forward(ad::Tape& tape, const TemporalBuffer& buffer);

  // Inference: forward pass with fraction features clamped to [0,1].
  Forecast predict(const TemporalBuffer& buffer, int horizon = 1);

  // One optimizer step on the mean squared error over (buffer, realized
  // next-state) pairs; returns the pre-step loss.
  double train_step(
      const std::vector<std::pair<TemporalBuffer, ad::Tensor>>& pairs,
      ad::AdamOptimizer& opt);

 private:
  std::size_t hidden_;
  std::size_t layers_;
  ad::ParamSet params_;
};

}  // namespace meclab::tgnn
