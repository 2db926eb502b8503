#include "meclab/marl/observation.hpp"

#include <algorithm>
#include <cmath>

#include "meclab/tgnn/graph.hpp"

namespace meclab::marl {

namespace {

double norm_in_range(double v, const mec::Range& r) {
  if (!(r.hi > r.lo)) return 0.0;
  return std::clamp((v - r.lo) / (r.hi - r.lo), 0.0, 1.0);
}

double norm_distance(double d_km, const mec::Range& coord) {
  const double diag = (coord.hi - coord.lo) * std::sqrt(2.0);
  return diag > 0.0 ? std::min(d_km / diag, 1.0) : 0.0;
}

double norm_power(double watts, const mec::EnvConfig& cfg) {
  return norm_in_range(mec::watts_to_dbm(watts), cfg.power_dbm);
}

}  // namespace

std::size_t local_obs_dim(int num_servers) {
  return 4 + 4 * static_cast<std::size_t>(num_servers);
}

std::size_t augmented_obs_dim(int num_servers) {
  return local_obs_dim(num_servers) +
         tgnn::kForecastFeatures * static_cast<std::size_t>(num_servers);
}

std::size_t global_state_dim(int num_servers, int num_devices) {
  return 5 * static_cast<std::size_t>(num_servers) +
         5 * static_cast<std::size_t>(num_devices) +
         tgnn::kForecastFeatures * static_cast<std::size_t>(num_servers);
}

std::vector<double> local_observation(
    const mec::EnvConfig& cfg, const mec::DeviceState& dev,
    const std::vector<mec::ServerState>& server_view) {
  std::vector<double> obs;
  obs.reserve(local_obs_dim(cfg.num_servers));
  obs.push_back(norm_in_range(dev.position_km[0], cfg.coord_km));
  obs.push_back(norm_in_range(dev.position_km[1], cfg.coord_km));
  obs.push_back(
      norm_in_range(dev.task.size_bits / mec::kBitsPerMb, cfg.task_size_mb));
  obs.push_back(static_cast<double>(dev.task.priority) / 3.0);
  for (const mec::ServerState& s : server_view) {
    obs.push_back(s.load_fraction());
    obs.push_back(s.energy_fraction());
    obs.push_back(norm_in_range(s.bandwidth_hz / 1e6, cfg.bandwidth_mhz));
    obs.push_back(norm_distance(
        mec::distance_km(dev.position_km, s.position_km), cfg.coord_km));
  }
  return obs;
}

std::vector<double> local_observation(const mec::Environment& env,
                                      int device) {
  return local_observation(env.config(), env.devices().at(device),
                           env.servers());
}

std::vector<double> global_state(const mec::Environment& env,
                                 const ad::Tensor* forecast) {
  const mec::EnvConfig& cfg = env.config();
  std::vector<double> state;
  state.reserve(global_state_dim(cfg.num_servers, cfg.num_devices));
  for (const mec::ServerState& s : env.servers()) {
    state.push_back(s.load_fraction());
    state.push_back(s.energy_fraction());
    state.push_back(norm_in_range(s.bandwidth_hz / 1e6, cfg.bandwidth_mhz));
    state.push_back(norm_in_range(s.position_km[0], cfg.coord_km));
    state.push_back(norm_in_range(s.position_km[1], cfg.coord_km));
  }
  for (const mec::DeviceState& d : env.devices()) {
    state.push_back(norm_in_range(d.position_km[0], cfg.coord_km));
    state.push_back(norm_in_range(d.position_km[1], cfg.coord_km));
    state.push_back(
        norm_in_range(d.task.size_bits / mec::kBitsPerMb, cfg.task_size_mb));
    state.push_back(static_cast<double>(d.task.priority) / 3.0);
    state.push_back(norm_power(d.power_w, cfg));
  }
  const std::size_t block =
      tgnn::kForecastFeatures * static_cast<std::size_t>(cfg.num_servers);
  if (forecast != nullptr) {
    if (forecast->size() != block) {
      throw std::invalid_argument("global_state: forecast block size");
    }
    state.insert(state.end(), forecast->data(), forecast->data() + block);
  } else {
    state.insert(state.end(), block, 0.0);
  }
  return state;
}

}  // namespace meclab::marl
