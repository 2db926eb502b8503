#include "meclab/mec/audit.hpp"

#include <cmath>

namespace meclab::mec {

namespace {
constexpr double kRelTol = 1e-9;
}

const char* constraint_name(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::split_sum: return "split_sum";
    case ConstraintKind::capacity: return "capacity";
    case ConstraintKind::power_floor: return "power_floor";
    case ConstraintKind::energy_budget: return "energy_budget";
    case ConstraintKind::range: return "range";
    case ConstraintKind::coupling: return "coupling";
  }
  return "unknown";
}

std::string ConstraintViolation::describe() const {
  std::string s = constraint_name(kind);
  if (device >= 0) s += " device=" + std::to_string(device);
  if (server >= 0) s += " server=" + std::to_string(server);
  s += " value=" + std::to_string(value) + " bound=" + std::to_string(bound);
  return s;
}

std::vector<ConstraintViolation> audit_constraints(const StepRecord& record,
                                                   const EnvConfig& cfg) {
  std::vector<ConstraintViolation> report;
  const double noise = cfg.noise_w_per_hz();

  for (const SlotOutcome& out : record.outcomes) {
    if (out.stalled) continue;

    // split completeness over the served task
    double alpha_total = 0.0;
    for (const BranchOutcome& b : out.branches) {
      if (b.active) alpha_total += b.alpha;
    }
    if (std::fabs(alpha_total - 1.0) > 1e-12) {
      report.push_back({ConstraintKind::split_sum, out.device, -1, alpha_total,
                        1.0});
    }

    for (const BranchOutcome& b : out.branches) {
      if (!b.active) continue;
      const ServerState& srv = record.servers_before.at(b.server);
      const double d_m = b.distance_km * 1000.0;
      const double gain =
          channel_gain(b.distance_km, cfg.gain_ref, cfg.path_loss_exponent);

      const double floor =
          power_floor(noise, d_m, srv.bandwidth_hz, gain);
      if (b.power_w < floor * (1.0 - kRelTol)) {
        report.push_back({ConstraintKind::power_floor, out.device, b.server,
                          b.power_w, floor});
      }

      const double reach_m = max_range(
          b.power_w, cfg.antenna_gain_tx, cfg.antenna_gain_rx,
          cfg.wavelength_m, cfg.receive_threshold_w, cfg.path_loss_exponent);
      if (d_m > reach_m * (1.0 + kRelTol)) {
        report.push_back(
            {ConstraintKind::range, out.device, b.server, d_m, reach_m});
      }
    }

    // split-frequency coupling, checked in its monotone form when both
    // branches were granted an allocation from equal spare capacity
    const BranchOutcome& b0 = out.branches[0];
    const BranchOutcome& b1 = out.branches[1];
    if (b0.accepted && b1.accepted && b0.server != b1.server) {
      const double rho = priority_share(
          record.devices_before.at(out.device).task.priority, cfg.beta);
      const double spare0 = b0.freq_hz / rho;
      const double spare1 = b1.freq_hz / rho;
      const double spare_scale = std::max(std::fabs(spare0), std::fabs(spare1));
      if (std::fabs(spare0 - spare1) <= kRelTol * spare_scale) {
        const bool ordered = b0.alpha >= b1.alpha
                                 ? b0.freq_hz >= b1.freq_hz * (1.0 - kRelTol)
                                 : b1.freq_hz >= b0.freq_hz * (1.0 - kRelTol);
        if (!ordered) {
          report.push_back({ConstraintKind::coupling, out.device, b0.server,
                            b0.freq_hz, b1.freq_hz});
        }
      }
    }
  }

  for (std::size_t s = 0; s < record.servers_before.size(); ++s) {
    const ServerState& before = record.servers_before[s];
    const double total = before.load_hz + record.committed_hz[s];
    if (total > before.capacity_hz * (1.0 + kRelTol)) {
      report.push_back({ConstraintKind::capacity, -1, static_cast<int>(s),
                        total, before.capacity_hz});
    }
    if (record.cumulative_compute_j[s] >
        cfg.initial_energy_j * (1.0 + kRelTol)) {
      report.push_back({ConstraintKind::energy_budget, -1,
                        static_cast<int>(s), record.cumulative_compute_j[s],
                        cfg.initial_energy_j});
    }
  }

  return report;
}

}  // namespace meclab::mec
