#include "meclab/mec/env.hpp"

#include <algorithm>
#include <cmath>

namespace meclab::mec {

double reward(const std::vector<SlotOutcome>& outcomes, const EnvConfig& cfg) {
  if (outcomes.empty()) {
    throw std::invalid_argument("reward: outcomes must be non-empty");
  }
  double acc = 0.0;
  for (const SlotOutcome& o : outcomes) {
    const double penalty =
        cfg.omega_energy * o.e_total_j / cfg.energy_ref_j +
        cfg.omega_delay * o.t_total_s / cfg.effective_time_ref_s();
    acc += (o.completed ? cfg.completion_bonus : 0.0) - penalty;
  }
  return acc / static_cast<double>(outcomes.size());
}

Environment::Environment(EnvConfig cfg, std::uint64_t seed)
    : cfg_(std::move(cfg)), master_seed_(seed) {
  cfg_.validate();
  reset(0);
}

void Environment::reset(std::uint64_t episode_index) {
  episode_ = episode_index;
  slot_ = 0;
  energy_forecast_.reset();
  RandomStream rng(mix_seed(master_seed_, episode_index, 0xE9D0DE));

  servers_.assign(cfg_.num_servers, ServerState{});
  for (auto& s : servers_) {
    s.capacity_hz =
        rng.uniform(cfg_.server_capacity_ghz.lo, cfg_.server_capacity_ghz.hi) *
        1e9;
    s.bandwidth_hz =
        rng.uniform(cfg_.bandwidth_mhz.lo, cfg_.bandwidth_mhz.hi) * 1e6;
    s.position_km = {rng.uniform(cfg_.coord_km.lo, cfg_.coord_km.hi),
                     rng.uniform(cfg_.coord_km.lo, cfg_.coord_km.hi)};
    s.initial_energy_j = cfg_.initial_energy_j;
    s.energy_j = cfg_.initial_energy_j;
  }
  background_load_frac_.resize(servers_.size());
  for (std::size_t i = 0; i < servers_.size(); ++i) {
    background_load_frac_[i] = rng.uniform(cfg_.background_load_frac.lo,
                                           cfg_.background_load_frac.hi);
    servers_[i].load_hz = background_load_frac_[i] * servers_[i].capacity_hz;
  }

  devices_.assign(cfg_.num_devices, DeviceState{});
  for (auto& d : devices_) {
    d.position_km = {rng.uniform(cfg_.coord_km.lo, cfg_.coord_km.hi),
                     rng.uniform(cfg_.coord_km.lo, cfg_.coord_km.hi)};
    d.task.size_bits =
        rng.uniform(cfg_.task_size_mb.lo, cfg_.task_size_mb.hi) * kBitsPerMb;
    d.task.priority = rng.uniform_int(static_cast<int>(cfg_.priority_level.lo),
                                      static_cast<int>(cfg_.priority_level.hi));
    d.power_w = cfg_.power_max_w();
  }

  cumulative_compute_j_.assign(cfg_.num_servers, 0.0);
}

void Environment::set_energy_forecast(
    std::optional<std::vector<double>> energy_frac) {
  if (energy_frac && energy_frac->size() != servers_.size()) {
    throw std::invalid_argument(
        "set_energy_forecast: one entry per server required");
  }
  energy_forecast_ = std::move(energy_frac);
}

std::vector<ServerPair> Environment::ranked_pairs(int device) const {
  const DeviceState& dev = devices_.at(device);
  const double reach_m =
      max_range(cfg_.power_max_w(), cfg_.antenna_gain_tx, cfg_.antenna_gain_rx,
                cfg_.wavelength_m, cfg_.receive_threshold_w,
                cfg_.path_loss_exponent);

  struct Member {
    int id;
    double score;  // energy fraction (forecast when available) - load frac
  };
  std::vector<Member> live;
  for (int s = 0; s < static_cast<int>(servers_.size()); ++s) {
    const ServerState& srv = servers_[s];
    if (!(srv.energy_j > 0.0)) continue;
    if (distance_km(dev.position_km, srv.position_km) * 1000.0 > reach_m) {
      continue;
    }
    const double energy_frac = energy_forecast_
                                   ? (*energy_forecast_)[s]
                                   : srv.energy_fraction();
    live.push_back({s, energy_frac - srv.load_fraction()});
  }
  if (live.empty()) return {};

  std::vector<ServerPair> pairs;
  if (live.size() == 1) {
    pairs.push_back({live[0].id, live[0].id});
  } else {
    struct Candidate {
      double score;
      int lo, hi;
      ServerPair pair;
    };
    std::vector<Candidate> cands;
    for (std::size_t i = 0; i < live.size(); ++i) {
      for (std::size_t j = i + 1; j < live.size(); ++j) {
        const Member& a = live[i];
        const Member& b = live[j];
        // the stronger member serves the larger split share
        const bool a_first =
            a.score > b.score || (a.score == b.score && a.id < b.id);
        Candidate c;
        c.score = a.score + b.score;
        c.lo = std::min(a.id, b.id);
        c.hi = std::max(a.id, b.id);
        c.pair = a_first ? ServerPair{a.id, b.id} : ServerPair{b.id, a.id};
        cands.push_back(c);
      }
    }
    std::sort(cands.begin(), cands.end(),
              [](const Candidate& x, const Candidate& y) {
                if (x.score != y.score) return x.score > y.score;
                if (x.lo != y.lo) return x.lo < y.lo;
                return x.hi < y.hi;
              });
    for (const auto& c : cands) {
      pairs.push_back(c.pair);
      if (pairs.size() == 3) break;
    }
  }
  while (pairs.size() < 3) pairs.push_back(pairs.front());
  return pairs;
}

std::vector<ServerPair> Environment::feasible_pairs(int device) const {
  auto pairs = ranked_pairs(device);
  if (pairs.empty()) throw NoFeasibleTarget(device);
  return pairs;
}

SlotOutcome Environment::resolve_device(int device, const HybridAction& action,
                                        std::vector<double>& committed_hz) {
  SlotOutcome out;
  out.device = device;

  const auto pairs = ranked_pairs(device);
  if (pairs.empty()) {
    out.stalled = true;
    out.completed = false;
    out.cost = slot_cost(out, cfg_.omega_energy, cfg_.omega_delay);
    return out;
  }
  const ServerPair pair = pairs[static_cast<std::size_t>(action.chosen_slot())];
  out.pair_first = pair.first;
  out.pair_second = pair.second;

  DeviceState& dev = devices_[device];
  const double rho = priority_share(dev.task.priority, cfg_.beta);

  struct BranchPlan {
    int server;
    double alpha;
  };
  std::vector<BranchPlan> plan;
  if (pair.degenerate()) {
    plan.push_back({pair.first, 1.0});
  } else {
    plan.push_back({pair.first, action.split});
    plan.push_back({pair.second, 1.0 - action.split});
  }

  // Lift the transmit power to every active link's floor: the minimum that
  // supports the channel and the minimum whose reach covers the distance.
  double p_eff = std::clamp(action.power_w, cfg_.power_min_w(),
                            cfg_.power_max_w());
  for (const BranchPlan& bp : plan) {
    if (bp.alpha <= 0.0) continue;
    const ServerState& srv = servers_[bp.server];
    const double d_m =
        distance_km(dev.position_km, srv.position_km) * 1000.0;
    const double gain = channel_gain(d_m / 1000.0, cfg_.gain_ref,
                                     cfg_.path_loss_exponent);
    p_eff = std::max(p_eff, power_floor(cfg_.noise_w_per_hz(), d_m,
                                        srv.bandwidth_hz, gain));
    p_eff = std::max(
        p_eff, range_power_floor(d_m, cfg_.antenna_gain_tx,
                                 cfg_.antenna_gain_rx, cfg_.wavelength_m,
                                 cfg_.receive_threshold_w,
                                 cfg_.path_loss_exponent));
  }
  p_eff = std::min(p_eff, cfg_.power_max_w());
  dev.power_w = p_eff;

  for (std::size_t k = 0; k < plan.size(); ++k) {
    const BranchPlan& bp = plan[k];
    BranchOutcome& b = out.branches[k];
    b.server = bp.server;
    b.alpha = bp.alpha;
    b.power_w = p_eff;
    if (bp.alpha <= 0.0) continue;
    b.active = true;

    ServerState& srv = servers_[bp.server];
    b.server_alive_at_selection = srv.energy_j > 0.0;
    b.distance_km = distance_km(dev.position_km, srv.position_km);

    const double freq = allocate_frequency(rho, srv);
    if (!(freq > 0.0)) continue;  // saturated server: branch refused

    const LinkQuality link = link_quality(dev, srv, cfg_);
    const auto [t_tr, e_tr] = transmit(bp.alpha, dev.task, p_eff, link);
    const ExecutionResult ex =
        execute(bp.alpha, dev.task, freq, cfg_.kappa, cfg_.cycles_per_bit);

    if (srv.energy_j < ex.e_comp_j) continue;  // budget refusal, no changes

    srv.load_hz += freq;
    srv.energy_j -= ex.e_comp_j;
    committed_hz[bp.server] += freq;
    cumulative_compute_j_[bp.server] += ex.e_comp_j;

    b.freq_hz = freq;
    b.t_trans_s = t_tr;
    b.e_trans_j = e_tr;
    b.t_comp_s = ex.t_comp_s;
    b.e_comp_j = ex.e_comp_j;
    b.accepted = true;
  }

  SlotOutcome combined = task_outcome(out.branches[0], out.branches[1], cfg_);
  combined.device = device;
  combined.pair_first = out.pair_first;
  combined.pair_second = out.pair_second;
  return combined;
}

void Environment::redraw_for_next_slot() {
  RandomStream rng(mix_seed(master_seed_, episode_,
                            static_cast<std::uint64_t>(slot_) + 1, 0x510D));
  const Range& band = cfg_.background_load_frac;
  for (auto& s : servers_) {
    if (cfg_.load_persistence <= 0.0) {
      s.load_hz = rng.uniform(band.lo, band.hi) * s.capacity_hz;
    } else {
      // committed allocations release; the background fraction carries over
      // with first-order persistence
      const double frac = background_load_frac_[&s - servers_.data()];
      const double mid = 0.5 * (band.lo + band.hi);
      const double next = mid + cfg_.load_persistence * (frac - mid) +
                          cfg_.load_jitter * (band.hi - band.lo) *
                              rng.normal();
      const double clamped = std::clamp(next, band.lo, band.hi);
      background_load_frac_[&s - servers_.data()] = clamped;
      s.load_hz = clamped * s.capacity_hz;
    }
  }
  for (auto& d : devices_) {
    d.position_km = {rng.uniform(cfg_.coord_km.lo, cfg_.coord_km.hi),
                     rng.uniform(cfg_.coord_km.lo, cfg_.coord_km.hi)};
    d.task.size_bits =
        rng.uniform(cfg_.task_size_mb.lo, cfg_.task_size_mb.hi) * kBitsPerMb;
    d.task.priority = rng.uniform_int(static_cast<int>(cfg_.priority_level.lo),
                                      static_cast<int>(cfg_.priority_level.hi));
  }
}

StepRecord Environment::step(const std::vector<HybridAction>& actions) {
  if (actions.size() != devices_.size()) {
    throw std::invalid_argument("step: one action per device required");
  }
  for (const auto& a : actions) a.validate(cfg_);

  StepRecord record;
  record.episode = episode_;
  record.slot = slot_;
  record.servers_before = servers_;
  record.devices_before = devices_;
  record.actions = actions;
  record.committed_hz.assign(servers_.size(), 0.0);

  record.outcomes.reserve(devices_.size());
  for (std::size_t i = 0; i < devices_.size(); ++i) {
    record.outcomes.push_back(resolve_device(static_cast<int>(i), actions[i],
                                             record.committed_hz));
  }
  record.reward = reward(record.outcomes, cfg_);
  record.cumulative_compute_j = cumulative_compute_j_;

  redraw_for_next_slot();
  ++slot_;
  return record;
}

}  // namespace meclab::mec
