#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "meclab/ad/checkpoint.hpp"
#include "meclab/ad/params.hpp"
#include "meclab/baselines/policies.hpp"
#include "meclab/marl/networks.hpp"
#include "meclab/marl/observation.hpp"
#include "meclab/marl/replay.hpp"
#include "meclab/mec/audit.hpp"
#include "meclab/mec/env.hpp"
#include "meclab/tgnn/predictor.hpp"

namespace meclab::marl {

struct LearnerConfig {
  double gamma = 0.95;
  std::size_t replay_capacity = 100000;
  std::size_t batch_size = 64;
  double actor_lr = 1e-3;
  double critic_lr = 1e-2;
  double tau = 0.01;
  int actor_update_every = 100;  // global environment steps
  double sigma_start = 0.2;
  double sigma_end = 0.02;
  double temperature = 1.0;
  std::size_t actor_hidden = 64;
  std::size_t critic_hidden = 128;
  // Agents collect server state every this many slots; between collections
  // their observations keep the last broadcast values (device-own features
  // stay current). 1 = always fresh.
  int obs_refresh_every = 2;
  // predictor
  int k_hist = 5;
  int k_pred = 2;
  int forecast_horizon = 1;
  std::size_t gnn_hidden = 32;
  std::size_t gnn_layers = 3;
  double predictor_lr = 3e-3;
};

struct AgentNets {
  ad::ParamSet actor;
  ad::ParamSet critic;
  ad::ParamSet actor_target;
  ad::ParamSet critic_target;
};

void init_agent(AgentNets& nets, std::size_t obs_dim, std::size_t critic_in,
                const LearnerConfig& cfg, std::uint64_t seed);

// Per-agent TD target r + gamma * Q'(s', mu'(o')) as a B x 1 tensor. Target
// actors run in deterministic mode; nothing here carries gradients.
ad::Tensor td_target(const Batch& batch, const std::vector<AgentNets>& agents,
                     std::size_t agent, double gamma, double temperature);

// One optimizer step on the squared TD error; returns the pre-step loss.
double critic_update(AgentNets& nets, const Batch& batch,
                     const ad::Tensor& targets, ad::AdamOptimizer& opt);

// One ascent step on E[Q(s, mu(o))] for one agent, other agents' actions
// from the batch; the critic participates frozen. Returns the pre-step
// objective value.
double actor_update(std::size_t agent, std::vector<AgentNets>& agents,
                    const Batch& batch, ad::AdamOptimizer& opt,
                    RandomStream* gumbel_rng, double temperature);

struct TrainingDiverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EpisodeMetrics {
  double reward_mean = 0.0;         // mean per-slot shaped reward
  double energy_mean_j = 0.0;       // mean per task
  double latency_compute_s = 0.0;   // mean slower-branch compute delay
  double latency_total_s = 0.0;     // mean transmission-inclusive delay
  double completion_rate = 0.0;
  double cost_sum = 0.0;  // episode contribution to the cumulative objective
  long completed = 0;
  long generated = 0;
};

// Observers used by tests and audit logging.
struct TrainHooks {
  std::function<void(const mec::StepRecord&)> on_step;
  std::function<void(std::uint64_t episode, int slot)> on_forecast_refresh;
  std::function<void(std::uint64_t global_step)> on_actor_update;
};

// The per-episode interaction/training loop with the dual buffers: the
// temporal snapshot window feeding the state predictor and the transition
// replay feeding the learner.
class Trainer {
 public:
  Trainer(const mec::EnvConfig& env_cfg, const LearnerConfig& learner_cfg,
          baselines::PolicyKind policy, int slots_per_episode,
          std::uint64_t seed, std::uint64_t planned_steps = 0);

  EpisodeMetrics run_episode(std::uint64_t episode_index);

  // Frozen-policy evaluation episode (no exploration, no updates).
  EpisodeMetrics eval_episode(std::uint64_t episode_index);

  baselines::PolicyKind policy() const { return policy_; }
  mec::Environment& env() { return env_; }
  std::vector<AgentNets>& agents() { return agents_; }
  tgnn::StatePredictor* predictor() { return predictor_ ? &*predictor_ : nullptr; }
  ReplayBuffer& replay() { return replay_; }
  std::uint64_t global_step() const { return global_step_; }
  double exploration_sigma() const;
  TrainHooks& hooks() { return hooks_; }

  std::vector<ad::CheckpointRecord> checkpoint_records() const;
  void restore(const std::vector<ad::CheckpointRecord>& records);

 private:
  EpisodeMetrics run(std::uint64_t episode_index, bool learn, bool explore);
  std::vector<double> augmented_obs(int device) const;
  void maybe_refresh_forecast(std::uint64_t episode_index, int slot);
  void learn_from_replay();

  mec::EnvConfig env_cfg_;
  LearnerConfig cfg_;
  baselines::PolicyKind policy_;
  int slots_per_episode_;
  std::uint64_t planned_steps_;

  mec::Environment env_;
  std::vector<AgentNets> agents_;
  std::vector<ad::AdamOptimizer> actor_opts_;
  std::vector<ad::AdamOptimizer> critic_opts_;
  std::optional<tgnn::StatePredictor> predictor_;
  std::optional<ad::AdamOptimizer> predictor_opt_;
  tgnn::TemporalBuffer temporal_;
  ad::Tensor forecast_block_;  // |V| x forecast features, zeros until fresh
  bool have_forecast_ = false;
  std::vector<mec::ServerState> server_view_;  // last broadcast server state

  ReplayBuffer replay_;
  RandomStream act_rng_;
  RandomStream update_rng_;
  RandomStream replay_rng_;

  std::uint64_t global_step_ = 0;
  TrainHooks hooks_;
};

}  // namespace meclab::marl
