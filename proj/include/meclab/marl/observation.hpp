#pragma once

#include <vector>

#include "meclab/ad/tensor.hpp"
#include "meclab/mec/env.hpp"

namespace meclab::marl {

// Per-device local observation, all features normalized to [0,1]:
//   [x, y, task size, priority] then per server
//   [load fraction, energy fraction, bandwidth, distance].
// The server block is read from `server_view`, which the caller refreshes on
// its state-collection cadence; device-own features are always current.
std::vector<double> local_observation(
    const mec::EnvConfig& cfg, const mec::DeviceState& device,
    const std::vector<mec::ServerState>& server_view);

// Convenience overload with an always-fresh server view.
std::vector<double> local_observation(const mec::Environment& env, int device);

// Global critic state: per-server [load, energy, bandwidth, x, y], per-device
// [x, y, task size, priority, power], then the flattened forecast block
// (zeros when no forecast is in play).
std::vector<double> global_state(const mec::Environment& env,
                                 const ad::Tensor* forecast);

std::size_t local_obs_dim(int num_servers);
std::size_t augmented_obs_dim(int num_servers);
std::size_t global_state_dim(int num_servers, int num_devices);

}  // namespace meclab::marl
