#pragma once

#include <vector>

#include "meclab/ad/nn.hpp"
#include "meclab/mec/types.hpp"

namespace meclab::marl {

// Per-agent policy network: a two-hidden-layer trunk feeding a 3-way logits
// head (pair-slot selection, sampled straight-through) and a 2-way sigmoid
// head (split ratio, normalized power).
namespace actor {

struct ForwardOptions {
  double sigma = 0.0;                  // gaussian noise on pre-squash values
  RandomStream* gauss_rng = nullptr;   // required when sigma > 0
  RandomStream* gumbel_rng = nullptr;  // nullptr: zero-noise argmax sampling
  double temperature = 1.0;
  bool hard = true;
};

struct Heads {
  ad::Value logits;    // B x 3
  ad::Value discrete;  // B x 3, one-hot in hard mode
  ad::Value split;     // B x 1 in [0,1]
  ad::Value power_u;   // B x 1 in [0,1]
  ad::Value action;    // B x 5 concatenation
};

// Input rows [zero_in_begin, zero_in_begin + zero_in_count) of the first
// layer start at zero: augmentation features begin as a no-op pathway the
// optimizer can grow into, so augmented and non-augmented variants start
// from identical behavior.
struct InitOptions {
  std::size_t zero_in_begin = 0;
  std::size_t zero_in_count = 0;
};

void init(ad::ParamSet& params, std::size_t obs_dim, std::size_t hidden,
          RandomStream& rng, const InitOptions& opts = {});
Heads forward(ad::Tape& tape, ad::ParamSet& params, ad::Value obs,
              const ForwardOptions& opts);
// Parameters enter as constants (no gradient accumulation); used for target
// networks.
Heads forward_frozen(ad::Tape& tape, const ad::ParamSet& params, ad::Value obs,
                     const ForwardOptions& opts);

}  // namespace actor

// Centralized action-value network over [global state, joint actions].
namespace critic {

void init(ad::ParamSet& params, std::size_t input_dim, std::size_t hidden,
          RandomStream& rng);
// Trainable forward (parameters on the tape).
ad::Value forward(ad::Tape& tape, ad::ParamSet& params, ad::Value input);
// Frozen forward: parameters enter as constants, so gradients flow through
// the network into its inputs but never into the parameters.
ad::Value forward_frozen(ad::Tape& tape, const ad::ParamSet& params,
                         ad::Value input);

}  // namespace critic

// Single-observation convenience wrapper producing an executable action plus
// its canonical replay vector.
struct ActionSample {
  mec::HybridAction action;
  std::array<double, mec::kActionDim> vec;
};
ActionSample sample_action(ad::ParamSet& actor_params,
                           const std::vector<double>& obs,
                           const actor::ForwardOptions& opts,
                           const mec::EnvConfig& cfg);

}  // namespace meclab::marl
