// Acceptance gate: one check per criterion, each printed as a pass/fail
// line. Exits nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "grad_check.hpp"
#include "mec_oracles.hpp"
#include "meclab/harness/runner.hpp"
#include "meclab/marl/maddpg.hpp"
#include "tgnn_synthetic.hpp"

using namespace meclab;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void report(int id, const char* label, bool pass, const std::string& detail,
            double seconds) {
  std::printf("[%d] %-34s %s  (%s; %.1fs)\n", id, label,
              pass ? "PASS" : "FAIL", detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

mec::EnvConfig desk_env() {
  mec::EnvConfig cfg;
  cfg.num_servers = 3;
  cfg.num_devices = 3;
  cfg.cycles_per_bit = 10.0;
  return cfg;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct FinalWindow {
  double reward = 0.0;
  double energy = 0.0;
  double completion = 0.0;
};

// Mean over the last `window` episodes of a per-episode metrics series.
FinalWindow final_window(const std::vector<marl::EpisodeMetrics>& eps,
                         std::size_t window) {
  FinalWindow w;
  const std::size_t begin = eps.size() > window ? eps.size() - window : 0;
  long completed = 0, generated = 0;
  for (std::size_t i = begin; i < eps.size(); ++i) {
    w.reward += eps[i].reward_mean;
    w.energy += eps[i].energy_mean_j;
    completed += eps[i].completed;
    generated += eps[i].generated;
  }
  const double n = static_cast<double>(eps.size() - begin);
  w.reward /= n;
  w.energy /= n;
  w.completion = generated > 0 ? double(completed) / double(generated) : 0.0;
  return w;
}

std::vector<marl::EpisodeMetrics> rollout(baselines::PolicyKind policy,
                                          std::uint64_t seed, long episodes) {
  const mec::EnvConfig env = desk_env();
  marl::LearnerConfig lc;
  const bool learns = baselines::policy_learns(policy);
  marl::Trainer tr(env, lc, policy, 10, seed,
                   learns ? static_cast<std::uint64_t>(episodes) * 10 : 0);
  std::vector<marl::EpisodeMetrics> out;
  out.reserve(episodes);
  for (long ep = 0; ep < episodes; ++ep) {
    out.push_back(tr.run_episode(static_cast<std::uint64_t>(ep)));
  }
  return out;
}

// ---------------------------------------------------------------------------

void criterion_1_closed_form_oracles() {
  Timer timer;
  const auto res = mec_oracle::run_closed_form_suite(100, 0xACC01);
  std::ostringstream detail;
  detail << res.cases << " checks, max rel err " << res.max_rel_err;
  report(1, "closed-form oracle suite", res.max_rel_err <= 1e-12,
         detail.str(), timer.seconds());
}

void criterion_2_constraint_audit() {
  Timer timer;
  long violations = 0;
  long slots = 0;
  const mec::EnvConfig env = desk_env();
  for (auto policy :
       {baselines::PolicyKind::tg_dcmaddpg,
        baselines::PolicyKind::dc_maddpg_ablation, baselines::PolicyKind::rop,
        baselines::PolicyKind::foo}) {
    marl::LearnerConfig lc;
    lc.batch_size = 1u << 30;  // audit the action surface, not the updates
    marl::Trainer tr(env, lc, policy, 10, 0xA0D17 + int(policy), 10000);
    tr.hooks().on_step = [&](const mec::StepRecord& rec) {
      violations +=
          static_cast<long>(mec::audit_constraints(rec, env).size());
      ++slots;
    };
    for (long ep = 0; ep < 1000; ++ep) {
      tr.run_episode(static_cast<std::uint64_t>(ep));
    }
  }
  std::ostringstream detail;
  detail << violations << " violations over " << slots
         << " audited slots, 4 policies x 1000 episodes";
  report(2, "constraint audit", violations == 0, detail.str(),
         timer.seconds());
}

void criterion_3_gradient_checks() {
  Timer timer;
  const auto results = grad_check::run_all(50, 0x96AD);
  double worst = 0.0;
  std::string worst_name;
  long cases = 0;
  for (const auto& r : results) {
    if (r.worst > worst) {
      worst = r.worst;
      worst_name = r.name;
    }
    cases += r.cases;
  }
  std::ostringstream detail;
  detail << results.size() << " ops x 50 cases, worst rel err " << worst
         << " (" << worst_name << ")";
  report(3, "gradient correctness", worst <= 1e-4, detail.str(),
         timer.seconds());
}

void criterion_4_predictor_skill() {
  Timer timer;
  const auto skill = tgnn_synth::run_skill_benchmark(0x5EED4);
  bool identities = true;

  // temporal kill: zero temporal projections make the output invariant to
  // everything but the newest snapshot
  {
    mec::EnvConfig cfg;
    cfg.coord_km = {0.0, 4.0};
    tgnn::StatePredictor pred(16, 3, 41);
    for (std::size_t l = 0; l < 3; ++l) {
      pred.params().entry("layer" + std::to_string(l) + ".wt").value.fill(0.0);
    }
    const auto proc_a = tgnn_synth::make_process(3, 6, 1001);
    const auto proc_b = tgnn_synth::make_process(3, 6, 2002);
    tgnn::TemporalBuffer ba(5), bb(5);
    for (int k = 0; k < 4; ++k) {
      ba.push(tgnn::build_graph(proc_a.states[k], proc_a.cfg));
      bb.push(tgnn::build_graph(proc_b.states[k], proc_b.cfg));
    }
    const auto shared = tgnn::build_graph(proc_a.states[5], proc_a.cfg);
    ba.push(shared);
    bb.push(shared);
    const auto fa = pred.predict(ba).predicted;
    const auto fb = pred.predict(bb).predicted;
    for (std::size_t i = 0; i < fa.size(); ++i) {
      if (fa.data()[i] != fb.data()[i]) identities = false;
    }
  }

  // spatial kill: zero spatial projections + diagonal adjacency isolate
  // every node from its neighbors
  {
    mec::EnvConfig cfg;
    cfg.coord_km = {0.0, 4.0};
    tgnn::StatePredictor pred(16, 3, 42);
    for (std::size_t l = 0; l < 3; ++l) {
      pred.params().entry("layer" + std::to_string(l) + ".ws").value.fill(0.0);
    }
    auto proc = tgnn_synth::make_process(3, 6, 3003);
    auto diag_graph = [&cfg](const std::vector<mec::ServerState>& servers) {
      tgnn::GraphSnapshot g = tgnn::build_graph(servers, cfg);
      ad::Tensor eye(servers.size(), servers.size());
      for (std::size_t i = 0; i < servers.size(); ++i) eye.at(i, i) = 1.0;
      g.adjacency = eye;
      return g;
    };
    tgnn::TemporalBuffer ba(5), bb(5);
    for (int k = 0; k < 5; ++k) {
      auto perturbed = proc.states[k];
      perturbed[2].load_hz = 0.93 * perturbed[2].capacity_hz;
      perturbed[2].energy_j *= 0.11;
      ba.push(diag_graph(proc.states[k]));
      bb.push(diag_graph(perturbed));
    }
    const auto fa = pred.predict(ba).predicted;
    const auto fb = pred.predict(bb).predicted;
    for (std::size_t r = 0; r < 2; ++r) {
      for (std::size_t c = 0; c < tgnn::kForecastFeatures; ++c) {
        if (fa.at(r, c) != fb.at(r, c)) identities = false;
      }
    }
  }

  std::ostringstream detail;
  detail << "model mse " << skill.model_mse << " vs persistence "
         << skill.persistence_mse << " (ratio " << skill.ratio()
         << "), ablation identities " << (identities ? "exact" : "BROKEN");
  report(4, "predictor skill + ablations",
         skill.model_mse <= 0.8 * skill.persistence_mse && identities,
         detail.str(), timer.seconds());
}

struct LearningResults {
  std::vector<double> tg_reward, abl_reward, rop_reward;
  std::vector<double> tg_energy;
};

LearningResults criterion_5_learning_sanity() {
  Timer timer;
  LearningResults out;
  const long episodes = 300;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto tg =
        rollout(baselines::PolicyKind::tg_dcmaddpg, seed, episodes);
    const auto abl =
        rollout(baselines::PolicyKind::dc_maddpg_ablation, seed, episodes);
    const auto rop = rollout(baselines::PolicyKind::rop, seed, episodes);
    const auto wt = final_window(tg, 50);
    out.tg_reward.push_back(wt.reward);
    out.tg_energy.push_back(wt.energy);
    out.abl_reward.push_back(final_window(abl, 50).reward);
    out.rop_reward.push_back(final_window(rop, 50).reward);
  }
  const double med_tg = median(out.tg_reward);
  const double med_abl = median(out.abl_reward);
  const double med_rop = median(out.rop_reward);
  const bool pass = med_tg >= med_abl && med_tg >= med_rop + 0.1 &&
                    med_abl >= med_rop + 0.1;
  std::ostringstream detail;
  detail << "median final-window reward: tg " << med_tg << ", ablation "
         << med_abl << ", rop " << med_rop << " (5 seeds, 300 episodes)";
  report(5, "learning sanity orderings", pass, detail.str(), timer.seconds());
  return out;
}

void criterion_6_baseline_orderings(const LearningResults& learned) {
  Timer timer;
  std::vector<double> foo_completion, rop_completion, foo_energy;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto foo = rollout(baselines::PolicyKind::foo, seed, 300);
    const auto rop = rollout(baselines::PolicyKind::rop, seed, 300);
    const auto wf = final_window(foo, 300);  // whole-run medians
    const auto wr = final_window(rop, 300);
    foo_completion.push_back(wf.completion);
    rop_completion.push_back(wr.completion);
    foo_energy.push_back(wf.energy);
  }
  const double med_foo_c = median(foo_completion);
  const double med_rop_c = median(rop_completion);
  const double med_foo_e = median(foo_energy);
  const double med_tg_e = median(learned.tg_energy);
  const bool pass = med_foo_c >= med_rop_c && med_foo_e >= med_tg_e;
  std::ostringstream detail;
  detail << "completion foo " << med_foo_c << " vs rop " << med_rop_c
         << "; energy foo " << med_foo_e << " J vs trained tg " << med_tg_e
         << " J";
  report(6, "baseline orderings", pass, detail.str(), timer.seconds());
}

void criterion_7_algorithm_mechanics() {
  Timer timer;
  bool refresh_ok = true, window_ok = true, cadence_ok = true,
       drift_ok = true;

  // temporal window holds exactly the last five snapshots in order
  {
    mec::EnvConfig cfg;
    tgnn::TemporalBuffer buf(5);
    std::vector<mec::ServerState> servers(2);
    for (auto& s : servers) {
      s.capacity_hz = 1e10;
      s.bandwidth_hz = 2e7;
      s.initial_energy_j = 1.0;
      s.energy_j = 1.0;
      s.position_km = {1.0, 2.0};
    }
    for (int t = 0; t < 9; ++t) {
      servers[0].load_hz = 1e9 * t;
      buf.push(tgnn::build_graph(servers, cfg));
    }
    if (!buf.full() || buf.size() != 5) window_ok = false;
    for (int k = 0; k < 5; ++k) {
      if (buf.at(k).node_features.at(0, 0) != (4 + k) * 1e9 / 1e10) {
        window_ok = false;
      }
    }
  }

  // refresh slots, actor-update cadence, and target drift in one run
  const mec::EnvConfig env = desk_env();
  marl::LearnerConfig lc;  // k_pred 2, k_hist 5, actor cadence 100
  marl::Trainer tr(env, lc, baselines::PolicyKind::tg_dcmaddpg, 10, 0xC7,
                   300);
  std::vector<std::pair<std::uint64_t, int>> refreshes;
  std::vector<std::uint64_t> update_steps;
  tr.hooks().on_forecast_refresh = [&](std::uint64_t ep, int t) {
    refreshes.emplace_back(ep, t);
  };
  tr.hooks().on_actor_update = [&](std::uint64_t step) {
    update_steps.push_back(step);
  };

  std::vector<bool> actor_changed;
  const double tau = lc.tau;
  double worst_drift_excess = 0.0;
  for (int ep = 0; ep < 30; ++ep) {
    const ad::ParamSet actor_before = ad::clone_params(tr.agents()[0].actor);
    const ad::ParamSet target_before =
        ad::clone_params(tr.agents()[0].actor_target);
    tr.run_episode(ep);
    bool changed = false;
    for (std::size_t e = 0; e < actor_before.size(); ++e) {
      const auto& a = actor_before.entries()[e].value;
      const auto& b = tr.agents()[0].actor.entries()[e].value;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.data()[i] != b.data()[i]) changed = true;
      }
    }
    actor_changed.push_back(changed);
    if (changed) {
      // the update lands on the episode's last slot, so the online weights
      // seen by the soft update equal the post-episode weights
      double drift = 0.0, gap = 0.0;
      for (std::size_t e = 0; e < target_before.size(); ++e) {
        const auto& told = target_before.entries()[e].value;
        const auto& tnew = tr.agents()[0].actor_target.entries()[e].value;
        const auto& onl = tr.agents()[0].actor.entries()[e].value;
        for (std::size_t i = 0; i < told.size(); ++i) {
          drift = std::max(drift, std::fabs(tnew.data()[i] - told.data()[i]));
          gap = std::max(gap, std::fabs(onl.data()[i] - told.data()[i]));
        }
      }
      worst_drift_excess =
          std::max(worst_drift_excess, drift - tau * gap * (1.0 + 1e-12));
    }
  }

  for (const auto& [ep, t] : refreshes) {
    if (t % lc.k_pred != 0) refresh_ok = false;
  }
  // within a 10-slot episode the 5-deep window fills after slot 3, so the
  // refreshes of every episode are exactly slots 4, 6, 8
  long count_ep2 = 0;
  for (const auto& [ep, t] : refreshes) {
    if (ep == 2) {
      ++count_ep2;
      if (t != 4 && t != 6 && t != 8) refresh_ok = false;
    }
  }
  if (count_ep2 != 3) refresh_ok = false;

  for (std::uint64_t step : update_steps) {
    if (step % 100 != 0) cadence_ok = false;
  }
  if (update_steps.empty()) cadence_ok = false;
  // episodes are 10 slots: parameter changes only at episodes 10, 20, 30
  for (std::size_t ep = 0; ep < actor_changed.size(); ++ep) {
    const bool expect = (ep + 1) % 10 == 0;
    if (actor_changed[ep] != expect) cadence_ok = false;
  }

  if (worst_drift_excess > 0.0) drift_ok = false;

  std::ostringstream detail;
  detail << refreshes.size() << " refreshes on the k_pred grid, "
         << update_steps.size() << " actor updates on the 100-step cadence, "
         << "drift bound slack " << -worst_drift_excess;
  report(7, "dual-buffer loop mechanics",
         refresh_ok && window_ok && cadence_ok && drift_ok, detail.str(),
         timer.seconds());
}

std::string file_bytes(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void criterion_8_reproducibility() {
  Timer timer;
  bool pass = true;
  const fs::path base = "acceptance_out";
  fs::remove_all(base);

  auto run_pair = [&](baselines::PolicyKind policy, harness::RunMode mode,
                      long episodes, const char* tag) {
    harness::RunConfig cfg;
    cfg.env = desk_env();
    cfg.policy = policy;
    cfg.mode = mode;
    cfg.episodes = episodes;
    cfg.report_stride = 10;
    cfg.seed = 2024;
    cfg.out_dir = (base / (std::string(tag) + "_a")).string();
    const auto a = harness::run(cfg);
    cfg.out_dir = (base / (std::string(tag) + "_b")).string();
    const auto b = harness::run(cfg);
    if (file_bytes(a.metrics_path) != file_bytes(b.metrics_path)) {
      pass = false;
    }
  };
  run_pair(baselines::PolicyKind::rop, harness::RunMode::train, 40, "rop");
  run_pair(baselines::PolicyKind::foo, harness::RunMode::eval, 40, "foo");
  run_pair(baselines::PolicyKind::tg_dcmaddpg, harness::RunMode::train, 20,
           "tg");
  report(8, "seeded reproducibility", pass,
         "train and eval reruns byte-identical", timer.seconds());
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  criterion_1_closed_form_oracles();
  criterion_2_constraint_audit();
  criterion_3_gradient_checks();
  criterion_4_predictor_skill();
  const LearningResults learned = criterion_5_learning_sanity();
  criterion_6_baseline_orderings(learned);
  criterion_7_algorithm_mechanics();
  criterion_8_reproducibility();
  if (g_failures == 0) {
    std::printf("all criteria passed\n");
  } else {
    std::printf("%d criterion(s) failed\n", g_failures);
  }
  return g_failures;
}
