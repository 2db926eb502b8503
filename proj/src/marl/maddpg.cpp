#include "meclab/marl/maddpg.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

namespace meclab::marl {

using ad::Tape;
using ad::Tensor;
using ad::Value;

namespace {

void require_finite(double v, const char* what, std::uint64_t episode,
                    int slot) {
  if (!std::isfinite(v)) {
    throw TrainingDiverged(std::string(what) + " diverged at episode " +
                           std::to_string(episode) + " slot " +
                           std::to_string(slot));
  }
}

// [state | a_0 | a_1 | ... ] as one plain tensor (no gradients needed).
Tensor joint_input(const Tensor& state, const std::vector<Tensor>& actions) {
  const std::size_t b = state.rows();
  std::size_t cols = state.cols();
  for (const auto& a : actions) cols += a.cols();
  Tensor out(b, cols);
  for (std::size_t r = 0; r < b; ++r) {
    double* dst = out.row(r);
    std::memcpy(dst, state.row(r), state.cols() * sizeof(double));
    dst += state.cols();
    for (const auto& a : actions) {
      std::memcpy(dst, a.row(r), a.cols() * sizeof(double));
      dst += a.cols();
    }
  }
  return out;
}

}  // namespace

void init_agent(AgentNets& nets, std::size_t obs_dim, std::size_t critic_in,
                const LearnerConfig& cfg, std::uint64_t seed) {
  RandomStream arng(mix_seed(seed, 0xAC));
  actor::init(nets.actor, obs_dim, cfg.actor_hidden, arng);
  RandomStream crng(mix_seed(seed, 0xC1));
  critic::init(nets.critic, critic_in, cfg.critic_hidden, crng);
  nets.actor_target = ad::clone_params(nets.actor);
  nets.critic_target = ad::clone_params(nets.critic);
}

ad::Tensor td_target(const Batch& batch, const std::vector<AgentNets>& agents,
                     std::size_t agent, double gamma, double temperature) {
  Tape tape;
  actor::ForwardOptions det;
  det.temperature = temperature;
  det.hard = true;

  std::vector<Tensor> next_actions;
  next_actions.reserve(agents.size());
  for (const AgentNets& nets : agents) {
    const std::size_t j = next_actions.size();
    const actor::Heads heads = actor::forward_frozen(
        tape, nets.actor_target, tape.constant(batch.obs_next[j]), det);
    next_actions.push_back(heads.action.val());
  }

  Value input =
      tape.constant(joint_input(batch.state_next, next_actions));
  const Tensor q =
      critic::forward_frozen(tape, agents[agent].critic_target, input).val();

  Tensor y(batch.size(), 1);
  for (std::size_t r = 0; r < batch.size(); ++r) {
    y.at(r, 0) = batch.rewards[r] + gamma * q.at(r, 0);
  }
  return y;
}

double critic_update(AgentNets& nets, const Batch& batch,
                     const ad::Tensor& targets, ad::AdamOptimizer& opt) {
  Tape tape;
  Value input = tape.constant(joint_input(batch.state, batch.actions));
  Value q = critic::forward(tape, nets.critic, input);
  Value loss = tape.mse(q, tape.constant(targets));
  const double before = loss.item();
  tape.backward(loss);
  opt.step(nets.critic);
  return before;
}

double actor_update(std::size_t agent, std::vector<AgentNets>& agents,
                    const Batch& batch, ad::AdamOptimizer& opt,
                    RandomStream* gumbel_rng, double temperature) {
  Tape tape;
  actor::ForwardOptions opts;
  opts.temperature = temperature;
  opts.hard = true;
  opts.gumbel_rng = gumbel_rng;

  const actor::Heads heads = actor::forward(
      tape, agents[agent].actor, tape.constant(batch.obs[agent]), opts);

  // joint action with this agent's slot live and the rest replayed
  Value joint = tape.constant(batch.state);
  for (std::size_t j = 0; j < agents.size(); ++j) {
    Value block = j == agent ? heads.action
                             : tape.constant(batch.actions[j]);
    joint = tape.concat_cols(joint, block);
  }
  Value q = critic::forward_frozen(tape, agents[agent].critic, joint);
  Value objective = tape.mean(q);
  const double before = objective.item();
  tape.backward(tape.scale(objective, -1.0));
  opt.step(agents[agent].actor);
  return before;
}

Trainer::Trainer(const mec::EnvConfig& env_cfg,
                 const LearnerConfig& learner_cfg,
                 baselines::PolicyKind policy, int slots_per_episode,
                 std::uint64_t seed, std::uint64_t planned_steps)
    : env_cfg_(env_cfg),
      cfg_(learner_cfg),
      policy_(policy),
      slots_per_episode_(slots_per_episode),
      planned_steps_(planned_steps),
      env_(env_cfg, mix_seed(seed, 0xE17)),
      temporal_(static_cast<std::size_t>(learner_cfg.k_hist)),
      forecast_block_(env_cfg.num_servers, tgnn::kForecastFeatures),
      replay_(learner_cfg.replay_capacity),
      act_rng_(mix_seed(seed, 0xAC7)),
      update_rng_(mix_seed(seed, 0x0BD)),
      replay_rng_(mix_seed(seed, 0x3E9)) {
  if (baselines::policy_learns(policy_)) {
    const std::size_t obs_dim = augmented_obs_dim(env_cfg_.num_servers);
    const std::size_t critic_in =
        global_state_dim(env_cfg_.num_servers, env_cfg_.num_devices) +
        static_cast<std::size_t>(env_cfg_.num_devices) * mec::kActionDim;
    agents_.resize(env_cfg_.num_devices);
    for (int a = 0; a < env_cfg_.num_devices; ++a) {
      init_agent(agents_[a], obs_dim, critic_in, cfg_,
                 mix_seed(seed, 0xA9E27, a));
      actor_opts_.emplace_back(cfg_.actor_lr);
      critic_opts_.emplace_back(cfg_.critic_lr);
    }
  }
  if (policy_ == baselines::PolicyKind::tg_dcmaddpg) {
    predictor_.emplace(cfg_.gnn_hidden, cfg_.gnn_layers,
                       mix_seed(seed, 0x76E0));
    predictor_opt_.emplace(cfg_.predictor_lr);
  }
}

double Trainer::exploration_sigma() const {
  if (planned_steps_ == 0) return cfg_.sigma_end;
  const double half = static_cast<double>(planned_steps_) / 2.0;
  const double frac =
      std::min(1.0, static_cast<double>(global_step_) / std::max(1.0, half));
  return cfg_.sigma_start + frac * (cfg_.sigma_end - cfg_.sigma_start);
}

std::vector<double> Trainer::augmented_obs(int device) const {
  const std::vector<double> local =
      local_observation(env_cfg_, env_.devices().at(device), server_view_);
  if (policy_ == baselines::PolicyKind::tg_dcmaddpg) {
    tgnn::Forecast f;
    f.predicted = forecast_block_;
    f.horizon = cfg_.forecast_horizon;
    return tgnn::augment_observation(local, f);
  }
  return baselines::ablation_augment(local, env_cfg_.num_servers);
}

void Trainer::maybe_refresh_forecast(std::uint64_t episode_index, int slot) {
  if (!predictor_) return;
  if (slot % cfg_.k_pred != 0 || !temporal_.full()) return;
  forecast_block_ =
      predictor_->predict(temporal_, cfg_.forecast_horizon).predicted;
  have_forecast_ = true;
  if (hooks_.on_forecast_refresh) hooks_.on_forecast_refresh(episode_index, slot);
}

void Trainer::learn_from_replay() {
  const auto idx = replay_.sample_indices(cfg_.batch_size, replay_rng_);
  const Batch batch = collate(replay_, idx);

  for (std::size_t a = 0; a < agents_.size(); ++a) {
    const Tensor y =
        td_target(batch, agents_, a, cfg_.gamma, cfg_.temperature);
    const double loss =
        critic_update(agents_[a], batch, y, critic_opts_[a]);
    require_finite(loss, "critic loss", env_.episode(), env_.slot());
  }
  if (cfg_.actor_update_every > 0 &&
      global_step_ % static_cast<std::uint64_t>(cfg_.actor_update_every) ==
          0) {
    for (std::size_t a = 0; a < agents_.size(); ++a) {
      const double obj = actor_update(a, agents_, batch, actor_opts_[a],
                                      &update_rng_, cfg_.temperature);
      require_finite(obj, "actor objective", env_.episode(), env_.slot());
    }
    for (AgentNets& nets : agents_) {
      ad::soft_update(nets.actor_target, nets.actor, cfg_.tau);
      ad::soft_update(nets.critic_target, nets.critic, cfg_.tau);
    }
    if (hooks_.on_actor_update) hooks_.on_actor_update(global_step_);
  }
}

EpisodeMetrics Trainer::run(std::uint64_t episode_index, bool learn,
                            bool explore) {
  env_.reset(episode_index);
  temporal_.clear();
  temporal_.push(tgnn::build_graph(env_.servers(), env_cfg_));
  // before the first prediction the cache holds the persistence prior
  if (predictor_) {
    forecast_block_ = tgnn::forecast_targets(env_.servers(), env_cfg_);
  } else {
    forecast_block_.fill(0.0);
  }
  have_forecast_ = false;
  server_view_ = env_.servers();

  const bool learner = baselines::policy_learns(policy_);
  std::optional<Transition> pending;

  EpisodeMetrics m;
  double latency_compute_acc = 0.0;
  double latency_total_acc = 0.0;
  double energy_acc = 0.0;
  double reward_acc = 0.0;

  for (int t = 0; t < slots_per_episode_; ++t) {
    if (cfg_.obs_refresh_every <= 1 || t % cfg_.obs_refresh_every == 0) {
      server_view_ = env_.servers();  // periodic state broadcast
    }
    maybe_refresh_forecast(episode_index, t);
    if (policy_ == baselines::PolicyKind::tg_dcmaddpg && have_forecast_) {
      std::vector<double> energy_frac(env_cfg_.num_servers);
      for (int s = 0; s < env_cfg_.num_servers; ++s) {
        energy_frac[s] = forecast_block_.at(s, 1);
      }
      env_.set_energy_forecast(std::move(energy_frac));
    } else {
      env_.set_energy_forecast(std::nullopt);
    }

    std::vector<std::vector<double>> aug;
    std::vector<double> state;
    if (learner) {
      for (int i = 0; i < env_cfg_.num_devices; ++i) {
        aug.push_back(augmented_obs(i));
      }
      const Tensor* fblock =
          policy_ == baselines::PolicyKind::tg_dcmaddpg ? &forecast_block_
                                                        : nullptr;
      state = global_state(env_, fblock);
      if (pending) {
        pending->obs_next = aug;
        pending->state_next = state;
        replay_.push(std::move(*pending));
        pending.reset();
      }
    }

    std::vector<mec::HybridAction> actions;
    std::vector<std::array<double, mec::kActionDim>> action_vecs;
    for (int i = 0; i < env_cfg_.num_devices; ++i) {
      mec::HybridAction act;
      if (learner) {
        actor::ForwardOptions opts;
        opts.temperature = cfg_.temperature;
        opts.hard = true;
        if (explore) {
          opts.sigma = exploration_sigma();
          opts.gauss_rng = &act_rng_;
          opts.gumbel_rng = &act_rng_;
        }
        ActionSample s =
            sample_action(agents_[i].actor, aug[i], opts, env_cfg_);
        act = s.action;
        action_vecs.push_back(s.vec);
      } else if (policy_ == baselines::PolicyKind::rop) {
        act = baselines::rop_action(env_.ranked_pairs(i), act_rng_, env_cfg_);
      } else {
        act = baselines::foo_action(env_.ranked_pairs(i), env_cfg_);
      }
      actions.push_back(act);
    }

    const mec::StepRecord record = env_.step(actions);
    if (hooks_.on_step) hooks_.on_step(record);
    require_finite(record.reward, "reward", episode_index, t);

    reward_acc += record.reward;
    for (const mec::SlotOutcome& o : record.outcomes) {
      ++m.generated;
      if (o.completed) ++m.completed;
      energy_acc += o.e_total_j;
      latency_compute_acc += o.t_total_s;
      latency_total_acc += o.t_total_incl_trans_s;
      m.cost_sum += o.cost;
    }

    // feed the predictor with the matured (window, realized state) pair
    const bool window_was_full = temporal_.full();
    tgnn::TemporalBuffer window_before = temporal_;
    temporal_.push(tgnn::build_graph(env_.servers(), env_cfg_));
    if (predictor_ && learn && window_was_full) {
      const Tensor target = tgnn::forecast_targets(env_.servers(), env_cfg_);
      // decay keeps late-run forecasts stable for the off-policy learner
      predictor_opt_->set_learning_rate(
          cfg_.predictor_lr /
          (1.0 + static_cast<double>(global_step_) / 1000.0));
      const double loss = predictor_->train_step(
          {{std::move(window_before), target}}, *predictor_opt_);
      require_finite(loss, "predictor loss", episode_index, t);
    }

    if (learner && learn) {
      Transition tr;
      tr.obs = std::move(aug);
      tr.actions = std::move(action_vecs);
      tr.reward = record.reward;
      tr.state = std::move(state);
      pending = std::move(tr);
    }

    ++global_step_;
    if (learner && learn && replay_.size() >= cfg_.batch_size) {
      learn_from_replay();
    }
  }

  if (pending) {
    // close the episode's last transition with the post-step view
    for (int i = 0; i < env_cfg_.num_devices; ++i) {
      pending->obs_next.push_back(augmented_obs(i));
    }
    const Tensor* fblock = policy_ == baselines::PolicyKind::tg_dcmaddpg
                               ? &forecast_block_
                               : nullptr;
    pending->state_next = global_state(env_, fblock);
    replay_.push(std::move(*pending));
  }

  const double tasks = std::max<long>(1, m.generated);
  m.reward_mean = reward_acc / std::max(1, slots_per_episode_);
  m.energy_mean_j = energy_acc / tasks;
  m.latency_compute_s = latency_compute_acc / tasks;
  m.latency_total_s = latency_total_acc / tasks;
  m.completion_rate =
      static_cast<double>(m.completed) / static_cast<double>(tasks);
  return m;
}

EpisodeMetrics Trainer::run_episode(std::uint64_t episode_index) {
  const bool learn = baselines::policy_learns(policy_);
  return run(episode_index, learn, learn);
}

EpisodeMetrics Trainer::eval_episode(std::uint64_t episode_index) {
  return run(episode_index, false, false);
}

std::vector<ad::CheckpointRecord> Trainer::checkpoint_records() const {
  std::vector<ad::CheckpointRecord> records;
  for (std::size_t a = 0; a < agents_.size(); ++a) {
    const std::string base = "agent" + std::to_string(a) + ".";
    for (const auto& [suffix, ps] :
         std::initializer_list<std::pair<const char*, const ad::ParamSet*>>{
             {"actor.", &agents_[a].actor},
             {"critic.", &agents_[a].critic},
             {"actor_target.", &agents_[a].actor_target},
             {"critic_target.", &agents_[a].critic_target}}) {
      auto part = ad::to_records(*ps, base + suffix);
      records.insert(records.end(), part.begin(), part.end());
    }
  }
  if (predictor_) {
    auto part = ad::to_records(predictor_->params(), "tgnn.");
    records.insert(records.end(), part.begin(), part.end());
  }
  return records;
}

void Trainer::restore(const std::vector<ad::CheckpointRecord>& records) {
  for (std::size_t a = 0; a < agents_.size(); ++a) {
    const std::string base = "agent" + std::to_string(a) + ".";
    ad::restore_params(agents_[a].actor, base + "actor.", records);
    ad::restore_params(agents_[a].critic, base + "critic.", records);
    ad::restore_params(agents_[a].actor_target, base + "actor_target.",
                       records);
    ad::restore_params(agents_[a].critic_target, base + "critic_target.",
                       records);
  }
  if (predictor_) {
    ad::restore_params(predictor_->params(), "tgnn.", records);
  }
}

}  // namespace meclab::marl
