#include "meclab/baselines/policies.hpp"

#include <stdexcept>

#include "meclab/tgnn/graph.hpp"

namespace meclab::baselines {

const char* policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::tg_dcmaddpg: return "tg";
    case PolicyKind::dc_maddpg_ablation: return "ablation";
    case PolicyKind::rop: return "rop";
    case PolicyKind::foo: return "foo";
  }
  return "unknown";
}

PolicyKind parse_policy(const std::string& name) {
  if (name == "tg") return PolicyKind::tg_dcmaddpg;
  if (name == "ablation") return PolicyKind::dc_maddpg_ablation;
  if (name == "rop") return PolicyKind::rop;
  if (name == "foo") return PolicyKind::foo;
  throw std::invalid_argument("unknown policy: " + name +
                              " (expected tg|ablation|rop|foo)");
}

bool policy_learns(PolicyKind kind) {
  return kind == PolicyKind::tg_dcmaddpg ||
         kind == PolicyKind::dc_maddpg_ablation;
}

mec::HybridAction rop_action(const std::vector<mec::ServerPair>& pairs,
                             RandomStream& rng, const mec::EnvConfig& cfg) {
  (void)pairs;  // the slot indexes the caller's ranked list
  mec::HybridAction a;
  a.pair_choice = {0.0, 0.0, 0.0};
  a.pair_choice[rng.uniform_index(3)] = 1.0;
  a.split = rng.uniform01();
  a.power_w = rng.uniform(cfg.power_min_w(), cfg.power_max_w());
  return a;
}

mec::HybridAction foo_action(const std::vector<mec::ServerPair>& pairs,
                             const mec::EnvConfig& cfg) {
  (void)pairs;
  mec::HybridAction a;
  a.pair_choice = {1.0, 0.0, 0.0};
  a.split = 1.0;
  a.power_w = cfg.power_max_w();
  return a;
}

std::vector<double> ablation_augment(const std::vector<double>& local_obs,
                                     int num_servers) {
  std::vector<double> out = local_obs;
  out.insert(out.end(),
             tgnn::kForecastFeatures * static_cast<std::size_t>(num_servers),
             0.0);
  return out;
}

}  // namespace meclab::baselines
