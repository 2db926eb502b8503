#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace meclab::mec {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  bool valid() const { return lo <= hi; }
};

constexpr double kBitsPerMb = 8.0e6;  // decimal megabyte
constexpr double kPi = 3.14159265358979323846;

inline double dbm_to_watts(double dbm) {
  return std::pow(10.0, (dbm - 30.0) / 10.0);
}

inline double watts_to_dbm(double watts) {
  return 10.0 * std::log10(watts) + 30.0;
}

// One offloading work unit: payload size and scheduling priority.
struct Task {
  double size_bits = 0.0;
  int priority = 1;  // in {1, 2, 3}

  void validate() const {
    if (!(size_bits > 0.0)) {
      throw std::domain_error("Task: size_bits must be > 0");
    }
    if (priority < 1 || priority > 3) {
      throw std::domain_error("Task: priority must be in {1,2,3}");
    }
  }
};

struct ServerState {
  double capacity_hz = 0.0;   // maximum CPU frequency
  double load_hz = 0.0;       // frequency already committed this slot
  double energy_j = 0.0;      // residual battery
  double bandwidth_hz = 0.0;  // channel bandwidth
  std::array<double, 2> position_km = {0.0, 0.0};
  double initial_energy_j = 0.0;

  double load_fraction() const { return load_hz / capacity_hz; }
  double energy_fraction() const {
    return initial_energy_j > 0.0 ? energy_j / initial_energy_j : 0.0;
  }
};

struct DeviceState {
  std::array<double, 2> position_km = {0.0, 0.0};
  double power_w = 0.0;  // current transmit power
  Task task;
};

struct LinkQuality {
  double gain = 0.0;      // dimensionless channel gain
  double rate_bps = 0.0;  // achievable rate
  double distance_km = 0.0;
};

// Per-server results for one half of a split task.
struct BranchOutcome {
  int server = -1;
  double alpha = 0.0;
  double t_trans_s = 0.0;
  double e_trans_j = 0.0;
  double t_comp_s = 0.0;
  double e_comp_j = 0.0;
  double freq_hz = 0.0;
  double power_w = 0.0;
  double distance_km = 0.0;
  bool active = false;    // alpha > 0
  bool accepted = false;  // allocation granted and energy budget honored
  bool server_alive_at_selection = false;
};

struct SlotOutcome {
  int device = -1;
  double e_total_j = 0.0;
  double t_total_s = 0.0;             // slower compute branch
  double t_total_incl_trans_s = 0.0;  // slower branch including transmission
  bool completed = false;
  bool stalled = false;  // no feasible target this slot
  double cost = 0.0;
  std::array<BranchOutcome, 2> branches;
  int pair_first = -1;
  int pair_second = -1;
};

// All model constants and draw ranges for the simulated system.
struct EnvConfig {
  int num_devices = 5;
  int num_servers = 5;

  double beta = 0.1;  // priority share scale
  double omega_energy = 1.0;
  double omega_delay = 2.0;

  Range task_size_mb{30.0, 50.0};
  Range priority_level{1.0, 3.0};
  Range server_capacity_ghz{4.5, 10.0};
  Range bandwidth_mhz{20.0, 25.0};
  Range coord_km{1.0, 5.0};  // service-area box, per axis
  Range power_dbm{0.0, 50.0};
  Range background_load_frac{0.0, 0.5};
  // Background-load evolution across slots: 0 redraws the fraction uniformly
  // every slot; otherwise an order-1 recursion toward the range midpoint
  // with innovation sd = load_jitter * range width, clamped to the range.
  double load_persistence = 0.4;
  double load_jitter = 0.3;

  double initial_energy_j = 10000.0;
  double slot_duration_s = 10.0;

  double kappa = 1e-28;               // switched capacitance
  double path_loss_exponent = 3.0;    // eta
  double gain_ref = 1e-6;             // gain = gain_ref * d_km^-eta
  double noise_dbm_per_hz = -174.0;   // thermal noise density
  double cycles_per_bit = 1.0;

  double completion_bonus = 2.0;      // reward shaping
  double energy_ref_j = 100.0;
  double time_ref_s = 0.0;            // 0 -> slot_duration_s

  double antenna_gain_tx = 1.0;
  double antenna_gain_rx = 1.0;
  double wavelength_m = 0.125;
  double receive_threshold_w = 1e-13;

  double noise_w_per_hz() const {
    return std::pow(10.0, (noise_dbm_per_hz - 30.0) / 10.0);
  }
  double power_min_w() const { return dbm_to_watts(power_dbm.lo); }
  double power_max_w() const { return dbm_to_watts(power_dbm.hi); }
  double effective_time_ref_s() const {
    return time_ref_s > 0.0 ? time_ref_s : slot_duration_s;
  }

  void validate() const;
};

// Ranked pair of server ids. first == second only in the degenerate single
// in-range-server case, where the whole task runs as one branch.
struct ServerPair {
  int first = -1;
  int second = -1;
  bool degenerate() const { return first == second; }
};

// A device's per-slot decision: pair slot selection (one-hot over the ranked
// pair list), split ratio to the pair's first server, and transmit power.
struct HybridAction {
  std::array<double, 3> pair_choice = {1.0, 0.0, 0.0};
  double split = 0.5;
  double power_w = 0.0;

  int chosen_slot() const {
    int best = 0;
    for (int i = 1; i < 3; ++i) {
      if (pair_choice[i] > pair_choice[best]) best = i;
    }
    return best;
  }

  void validate(const EnvConfig& cfg) const;
};

constexpr int kActionDim = 5;  // one-hot(3) + split + normalized power

// Normalized action vector handed to the critics: one-hot, split, and power
// mapped linearly in dBm onto [0, 1].
std::array<double, kActionDim> action_vector(const HybridAction& a,
                                             const EnvConfig& cfg);
HybridAction action_from_vector(const std::array<double, kActionDim>& v,
                                const EnvConfig& cfg);

}  // namespace meclab::mec
