#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "meclab/mec/formulas.hpp"
#include "meclab/mec/types.hpp"
#include "meclab/rng.hpp"

namespace meclab::mec {

struct NoFeasibleTarget : std::runtime_error {
  explicit NoFeasibleTarget(int device)
      : std::runtime_error("no feasible offloading target for device " +
                           std::to_string(device)) {}
};

// Everything a constraint audit needs about one executed slot.
struct StepRecord {
  std::uint64_t episode = 0;
  int slot = 0;
  std::vector<ServerState> servers_before;  // slot start, background load only
  std::vector<DeviceState> devices_before;
  std::vector<HybridAction> actions;
  std::vector<SlotOutcome> outcomes;
  double reward = 0.0;
  std::vector<double> committed_hz;          // allocations granted this slot
  std::vector<double> cumulative_compute_j;  // per server since episode start
};

// Mean shaped reward over the slot's tasks: completion bonus minus the
// normalized energy-delay cost. Bounded above by the bonus.
double reward(const std::vector<SlotOutcome>& outcomes, const EnvConfig& cfg);

// Slot-based offloading environment. Deterministic given (config, seed,
// episode index, action sequence); instances are independent.
class Environment {
 public:
  Environment(EnvConfig cfg, std::uint64_t seed);

  void reset(std::uint64_t episode_index);

  const EnvConfig& config() const { return cfg_; }
  const std::vector<ServerState>& servers() const { return servers_; }
  const std::vector<DeviceState>& devices() const { return devices_; }
  std::uint64_t episode() const { return episode_; }
  int slot() const { return slot_; }
  const std::vector<double>& cumulative_compute_j() const {
    return cumulative_compute_j_;
  }

  // Optional per-server residual-energy-fraction forecast used by pair
  // ranking in place of the current fractions. Cleared on reset.
  void set_energy_forecast(std::optional<std::vector<double>> energy_frac);

  // Ranked feasible pairs for a device: distinct in-range live servers,
  // scored by (energy fraction - load fraction) summed over the pair,
  // padded to three entries. Empty when no server is reachable.
  std::vector<ServerPair> ranked_pairs(int device) const;

  // Same, but a device with no reachable server is an error.
  std::vector<ServerPair> feasible_pairs(int device) const;

  // Executes one slot: resolves every device's action in id order against
  // the live server state, then redraws background load, device positions
  // and tasks for the next slot.
  StepRecord step(const std::vector<HybridAction>& actions);

 private:
  friend struct EnvTestAccess;

  SlotOutcome resolve_device(int device, const HybridAction& action,
                             std::vector<double>& committed_hz);
  void redraw_for_next_slot();

  EnvConfig cfg_;
  std::uint64_t master_seed_ = 0;
  std::uint64_t episode_ = 0;
  int slot_ = 0;
  std::vector<ServerState> servers_;
  std::vector<DeviceState> devices_;
  std::vector<double> background_load_frac_;
  std::vector<double> cumulative_compute_j_;
  std::optional<std::vector<double>> energy_forecast_;
};

}  // namespace meclab::mec
