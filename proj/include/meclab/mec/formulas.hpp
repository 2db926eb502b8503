#pragma once

#include <utility>

#include "meclab/mec/types.hpp"

namespace meclab::mec {

// Closed-form system model. Every function here is deterministic in its
// arguments; the environment composes them per slot.

// Share of a server's spare capacity granted to a task of the given
// priority, clamped to the valid proportion range (0, 1].
double priority_share(int priority, double beta);

// Path-loss channel gain and Shannon rate for a device-server link.
double channel_gain(double distance_km, double gain_ref, double exponent);
LinkQuality link_quality(const DeviceState& device, const ServerState& server,
                         const EnvConfig& cfg);

// Upload time and radio energy for the alpha-fraction of a task.
std::pair<double, double> transmit(double alpha, const Task& task,
                                   double power_w, const LinkQuality& link);

// CPU frequency granted from the server's spare capacity.
double allocate_frequency(double share, const ServerState& server);

struct ExecutionResult {
  double t_comp_s = 0.0;
  double e_comp_j = 0.0;
  double p_comp_w = 0.0;
};

// Cubic-power compute model for the alpha-fraction of a task.
ExecutionResult execute(double alpha, const Task& task, double freq_hz,
                        double kappa, double cycles_per_bit);

// Combine the two branch results into the per-task slot outcome. Total
// energy sums the four branch terms; total delay is the slower compute
// branch. Completion additionally requires each active branch to finish
// (transmission included) inside the slot on a server that was alive.
SlotOutcome task_outcome(const BranchOutcome& branch1,
                         const BranchOutcome& branch2, const EnvConfig& cfg);

// Weighted energy-delay cost of one task.
double slot_cost(const SlotOutcome& outcome, double omega_energy,
                 double omega_delay);

// Minimum transmit power able to support the link (distance in meters).
double power_floor(double noise_w_per_hz, double distance_m,
                   double bandwidth_hz, double gain);

// Maximum reachable distance in meters at the given transmit power.
double max_range(double power_w, double antenna_gain_tx,
                 double antenna_gain_rx, double wavelength_m,
                 double receive_threshold_w, double path_loss_exponent);

// Smallest power whose reach covers the given distance (inverse of
// max_range in the power argument).
double range_power_floor(double distance_m, double antenna_gain_tx,
                         double antenna_gain_rx, double wavelength_m,
                         double receive_threshold_w,
                         double path_loss_exponent);

double distance_km(const std::array<double, 2>& a,
                   const std::array<double, 2>& b);

}  // namespace meclab::mec
