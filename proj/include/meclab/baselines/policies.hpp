#pragma once

#include <string>
#include <vector>

#include "meclab/mec/types.hpp"
#include "meclab/rng.hpp"

namespace meclab::baselines {

enum class PolicyKind { tg_dcmaddpg, dc_maddpg_ablation, rop, foo };

const char* policy_name(PolicyKind kind);         // tg / ablation / rop / foo
PolicyKind parse_policy(const std::string& name); // throws on unknown
bool policy_learns(PolicyKind kind);

// Random offloading: uniform pair slot, uniform split, uniform power in
// watts over the configured band.
mec::HybridAction rop_action(const std::vector<mec::ServerPair>& pairs,
                             RandomStream& rng, const mec::EnvConfig& cfg);

// Full offloading: the top-ranked pair, everything to its first server, at
// maximum power.
mec::HybridAction foo_action(const std::vector<mec::ServerPair>& pairs,
                             const mec::EnvConfig& cfg);

// No-predictor ablation: the forecast block is replaced by zeros of the same
// length, keeping network shapes identical to the predictor-augmented
// variant.
std::vector<double> ablation_augment(const std::vector<double>& local_obs,
                                     int num_servers);

}  // namespace meclab::baselines
