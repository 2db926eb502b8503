#include "meclab/mec/formulas.hpp"

#include <algorithm>
#include <cmath>

namespace meclab::mec {

void EnvConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::domain_error(what);
  };
  require(num_devices > 0, "EnvConfig: num_devices must be > 0");
  require(num_servers > 0, "EnvConfig: num_servers must be > 0");
  require(beta > 0.0, "EnvConfig: beta must be > 0");
  require(omega_energy >= 0.0 && omega_delay >= 0.0,
          "EnvConfig: cost weights must be >= 0");
  for (const auto* r :
       {&task_size_mb, &priority_level, &server_capacity_ghz, &bandwidth_mhz,
        &coord_km, &power_dbm, &background_load_frac}) {
    require(r->valid(), "EnvConfig: range has lo > hi");
  }
  require(task_size_mb.lo > 0.0, "EnvConfig: task_size_mb must be positive");
  require(server_capacity_ghz.lo > 0.0,
          "EnvConfig: server_capacity_ghz must be positive");
  require(bandwidth_mhz.lo > 0.0, "EnvConfig: bandwidth_mhz must be positive");
  require(background_load_frac.lo >= 0.0 && background_load_frac.hi <= 1.0,
          "EnvConfig: background_load_frac must stay within [0,1]");
  require(load_persistence >= 0.0 && load_persistence < 1.0,
          "EnvConfig: load_persistence must lie in [0,1)");
  require(load_jitter >= 0.0, "EnvConfig: load_jitter must be >= 0");
  require(initial_energy_j > 0.0, "EnvConfig: initial_energy_j must be > 0");
  require(slot_duration_s > 0.0, "EnvConfig: slot_duration_s must be > 0");
  require(kappa > 0.0, "EnvConfig: kappa must be > 0");
  require(path_loss_exponent > 0.0,
          "EnvConfig: path_loss_exponent must be > 0");
  require(gain_ref > 0.0, "EnvConfig: gain_ref must be > 0");
  require(cycles_per_bit > 0.0, "EnvConfig: cycles_per_bit must be > 0");
  require(antenna_gain_tx > 0.0 && antenna_gain_rx > 0.0,
          "EnvConfig: antenna gains must be > 0");
  require(wavelength_m > 0.0, "EnvConfig: wavelength_m must be > 0");
  require(receive_threshold_w > 0.0,
          "EnvConfig: receive_threshold_w must be > 0");
  require(energy_ref_j > 0.0, "EnvConfig: energy_ref_j must be > 0");
}

void HybridAction::validate(const EnvConfig& cfg) const {
  double total = 0.0;
  double peak = 0.0;
  for (double v : pair_choice) {
    if (v < 0.0) throw std::domain_error("HybridAction: negative one-hot");
    total += v;
    peak = std::max(peak, v);
  }
  if (std::fabs(total - 1.0) > 1e-9 || std::fabs(peak - 1.0) > 1e-9) {
    throw std::domain_error("HybridAction: pair choice must be one-hot");
  }
  if (!(split >= 0.0 && split <= 1.0)) {
    throw std::domain_error("HybridAction: split outside [0,1]");
  }
  if (!(power_w >= cfg.power_min_w() * (1.0 - 1e-12) &&
        power_w <= cfg.power_max_w() * (1.0 + 1e-12))) {
    throw std::domain_error("HybridAction: power outside configured bounds");
  }
}

std::array<double, kActionDim> action_vector(const HybridAction& a,
                                             const EnvConfig& cfg) {
  const double lo = cfg.power_dbm.lo;
  const double hi = cfg.power_dbm.hi;
  const double width = hi > lo ? hi - lo : 1.0;
  const double u = std::clamp((watts_to_dbm(a.power_w) - lo) / width, 0.0, 1.0);
  return {a.pair_choice[0], a.pair_choice[1], a.pair_choice[2], a.split, u};
}

HybridAction action_from_vector(const std::array<double, kActionDim>& v,
                                const EnvConfig& cfg) {
  HybridAction a;
  a.pair_choice = {v[0], v[1], v[2]};
  a.split = v[3];
  const double dbm =
      cfg.power_dbm.lo + v[4] * (cfg.power_dbm.hi - cfg.power_dbm.lo);
  a.power_w = dbm_to_watts(dbm);
  return a;
}

double priority_share(int priority, double beta) {
  if (priority < 1 || priority > 3) {
    throw std::domain_error("priority_share: priority must be in {1,2,3}");
  }
  if (!(beta > 0.0)) {
    throw std::domain_error("priority_share: beta must be > 0");
  }
  return std::min(beta * static_cast<double>(priority), 1.0);
}

double channel_gain(double distance_km, double gain_ref, double exponent) {
  if (!(distance_km > 0.0)) {
    throw std::domain_error("channel_gain: distance must be > 0");
  }
  return gain_ref * std::pow(distance_km, -exponent);
}

double distance_km(const std::array<double, 2>& a,
                   const std::array<double, 2>& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  return std::sqrt(dx * dx + dy * dy);
}

LinkQuality link_quality(const DeviceState& device, const ServerState& server,
                         const EnvConfig& cfg) {
  if (device.power_w < 0.0) {
    throw std::domain_error("link_quality: power must be >= 0");
  }
  LinkQuality link;
  link.distance_km = distance_km(device.position_km, server.position_km);
  link.gain =
      channel_gain(link.distance_km, cfg.gain_ref, cfg.path_loss_exponent);
  const double snr = device.power_w * link.gain /
                     (cfg.noise_w_per_hz() * server.bandwidth_hz);
  link.rate_bps = server.bandwidth_hz * std::log2(1.0 + snr);
  return link;
}

std::pair<double, double> transmit(double alpha, const Task& task,
                                   double power_w, const LinkQuality& link) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::domain_error("transmit: alpha outside [0,1]");
  }
  if (alpha == 0.0) return {0.0, 0.0};
  if (!(link.rate_bps > 0.0)) {
    throw std::domain_error("transmit: zero-rate link cannot carry data");
  }
  const double t = alpha * task.size_bits / link.rate_bps;
  return {t, power_w * t};
}

double allocate_frequency(double share, const ServerState& server) {
  if (!(share >= 0.0 && share <= 1.0)) {
    throw std::domain_error("allocate_frequency: share outside [0,1]");
  }
  const double spare =
      server.capacity_hz * (1.0 - server.load_hz / server.capacity_hz);
  return share * spare;
}

ExecutionResult execute(double alpha, const Task& task, double freq_hz,
                        double kappa, double cycles_per_bit) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::domain_error("execute: alpha outside [0,1]");
  }
  ExecutionResult r;
  if (alpha == 0.0) return r;
  if (!(freq_hz > 0.0)) {
    throw std::domain_error("execute: zero frequency cannot compute");
  }
  r.p_comp_w = kappa * freq_hz * freq_hz * freq_hz;
  r.t_comp_s = alpha * task.size_bits * cycles_per_bit / freq_hz;
  r.e_comp_j = r.p_comp_w * r.t_comp_s;
  return r;
}

SlotOutcome task_outcome(const BranchOutcome& branch1,
                         const BranchOutcome& branch2, const EnvConfig& cfg) {
  SlotOutcome out;
  out.branches = {branch1, branch2};
  out.e_total_j = branch1.e_trans_j + branch2.e_trans_j + branch1.e_comp_j +
                  branch2.e_comp_j;
  out.t_total_s = std::max(branch1.t_comp_s, branch2.t_comp_s);
  out.t_total_incl_trans_s = std::max(branch1.t_trans_s + branch1.t_comp_s,
                                      branch2.t_trans_s + branch2.t_comp_s);
  bool completed = branch1.active || branch2.active;
  for (const BranchOutcome& b : out.branches) {
    if (!b.active) continue;
    if (!b.accepted || !b.server_alive_at_selection) completed = false;
    if (b.t_trans_s + b.t_comp_s > cfg.slot_duration_s) completed = false;
  }
  out.completed = completed;
  out.cost = slot_cost(out, cfg.omega_energy, cfg.omega_delay);
  return out;
}

double slot_cost(const SlotOutcome& outcome, double omega_energy,
                 double omega_delay) {
  if (omega_energy < 0.0 || omega_delay < 0.0) {
    throw std::domain_error("slot_cost: weights must be >= 0");
  }
  return omega_energy * outcome.e_total_j + omega_delay * outcome.t_total_s;
}

double power_floor(double noise_w_per_hz, double distance_m,
                   double bandwidth_hz, double gain) {
  if (!(gain > 0.0)) {
    throw std::domain_error("power_floor: zero gain link is infeasible");
  }
  if (!(bandwidth_hz > 0.0)) {
    throw std::domain_error("power_floor: bandwidth must be > 0");
  }
  return noise_w_per_hz * distance_m * distance_m / (bandwidth_hz * gain);
}

double max_range(double power_w, double antenna_gain_tx,
                 double antenna_gain_rx, double wavelength_m,
                 double receive_threshold_w, double path_loss_exponent) {
  const double numerator =
      power_w * antenna_gain_tx * antenna_gain_rx * wavelength_m *
      wavelength_m;
  const double denominator = (4.0 * kPi) * (4.0 * kPi) * receive_threshold_w;
  return std::pow(numerator / denominator, 1.0 / path_loss_exponent);
}

double range_power_floor(double distance_m, double antenna_gain_tx,
                         double antenna_gain_rx, double wavelength_m,
                         double receive_threshold_w,
                         double path_loss_exponent) {
  const double denominator =
      antenna_gain_tx * antenna_gain_rx * wavelength_m * wavelength_m;
  return std::pow(distance_m, path_loss_exponent) * (4.0 * kPi) * (4.0 * kPi) *
         receive_threshold_w / denominator;
}

}  // namespace meclab::mec
