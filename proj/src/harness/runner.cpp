#include "meclab/harness/runner.hpp"

#include <filesystem>
#include <iostream>

namespace meclab::harness {

namespace fs = std::filesystem;

namespace {

struct WindowAccumulator {
  double reward = 0.0;
  double energy = 0.0;
  double latency_compute = 0.0;
  double latency_total = 0.0;
  long completed = 0;
  long generated = 0;
  int episodes = 0;

  void add(const marl::EpisodeMetrics& m) {
    reward += m.reward_mean;
    energy += m.energy_mean_j;
    latency_compute += m.latency_compute_s;
    latency_total += m.latency_total_s;
    completed += m.completed;
    generated += m.generated;
    ++episodes;
  }

  MetricRecord flush(long episode_index, double cum_objective) {
    MetricRecord r;
    r.episode = episode_index;
    r.reward = reward / episodes;
    r.energy_j = energy / episodes;
    r.latency_compute_s = latency_compute / episodes;
    r.latency_total_s = latency_total / episodes;
    r.completion_rate =
        generated > 0 ? double(completed) / double(generated) : 0.0;
    r.cum_objective = cum_objective;
    *this = WindowAccumulator{};
    return r;
  }
};

}  // namespace

RunResult run(const RunConfig& cfg) {
  cfg.validate();
  fs::create_directories(cfg.out_dir);
  const fs::path out(cfg.out_dir);

  write_effective_config(
      cfg, (out / effective_config_filename(cfg.policy, cfg.env.num_servers))
               .string());

  const bool learns = baselines::policy_learns(cfg.policy);
  const bool training = cfg.mode == RunMode::train && learns;
  const std::uint64_t planned_steps =
      training ? static_cast<std::uint64_t>(cfg.episodes) *
                     static_cast<std::uint64_t>(cfg.slots_per_episode)
               : 0;

  marl::Trainer trainer(cfg.env, cfg.learner, cfg.policy,
                        cfg.slots_per_episode, cfg.seed, planned_steps);
  if (!cfg.checkpoint_in.empty()) {
    trainer.restore(ad::load_checkpoint(cfg.checkpoint_in));
  } else if (cfg.mode == RunMode::eval && learns) {
    throw ConfigError(
        "eval of a learned policy needs checkpoint_in to restore from");
  }

  std::ofstream audit_log;
  if (cfg.audit) {
    const auto path =
        out / audit_log_filename(cfg.policy, cfg.env.num_servers);
    audit_log.open(path.string(), std::ios::trunc);
    if (!audit_log) {
      throw std::runtime_error("cannot open audit log: " + path.string());
    }
    audit_log << "episode,slot,generated,completed,violations\n";
    trainer.hooks().on_step = [&audit_log, &cfg](const mec::StepRecord& rec) {
      long generated = 0, completed = 0;
      for (const auto& o : rec.outcomes) {
        ++generated;
        if (o.completed) ++completed;
      }
      const auto violations = mec::audit_constraints(rec, cfg.env);
      audit_log << rec.episode << ',' << rec.slot << ',' << generated << ','
                << completed << ',' << violations.size();
      for (const auto& v : violations) {
        audit_log << ",\"" << v.describe() << '"';
      }
      audit_log << '\n';
    };
  }

  RunResult result;
  result.metrics_path =
      (out / metrics_filename(cfg.policy, cfg.env.num_servers)).string();
  MetricsWriter writer(result.metrics_path);

  WindowAccumulator window;
  double cum_objective = 0.0;
  for (long ep = 0; ep < cfg.episodes; ++ep) {
    const marl::EpisodeMetrics m =
        cfg.mode == RunMode::train
            ? trainer.run_episode(static_cast<std::uint64_t>(ep))
            : trainer.eval_episode(static_cast<std::uint64_t>(ep));
    cum_objective += m.cost_sum;
    window.add(m);
    if ((ep + 1) % cfg.report_stride == 0 || ep + 1 == cfg.episodes) {
      const MetricRecord r = window.flush(ep + 1, cum_objective);
      writer.append(r);
      result.records.push_back(r);
    }
  }

  if (learns && cfg.mode == RunMode::train) {
    result.checkpoint_path =
        (out / checkpoint_filename(cfg.policy, cfg.env.num_servers)).string();
    ad::save_checkpoint(result.checkpoint_path, trainer.checkpoint_records());
  }
  return result;
}

std::vector<RunResult> run_sweep(const RunConfig& cfg) {
  std::vector<RunResult> results;
  for (int servers : cfg.sweep_servers) {
    RunConfig one = cfg;
    one.env.num_servers = servers;
    results.push_back(run(one));
  }
  return results;
}

}  // namespace meclab::harness
