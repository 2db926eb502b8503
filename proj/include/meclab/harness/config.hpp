#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "meclab/baselines/policies.hpp"
#include "meclab/marl/maddpg.hpp"
#include "meclab/mec/types.hpp"

namespace meclab::harness {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class RunMode { train, eval };

struct RunConfig {
  mec::EnvConfig env;
  marl::LearnerConfig learner;
  baselines::PolicyKind policy = baselines::PolicyKind::tg_dcmaddpg;
  RunMode mode = RunMode::train;  // set by the CLI subcommand, not a file key
  long episodes = 2000;
  int slots_per_episode = 10;
  int report_stride = 20;
  std::uint64_t seed = 1;
  std::vector<int> sweep_servers = {3, 5, 10, 15};
  std::string out_dir = "runs/out";
  bool audit = false;
  std::string checkpoint_in;  // optional restore source for eval

  void validate() const;
};

// Flat `key = value` file with `#` comments; ranges are two numbers, lists
// are space-separated. Unknown keys and out-of-range values raise
// ConfigError naming the key. Overrides win over file entries. An empty
// path yields pure defaults plus overrides.
RunConfig load_config(const std::string& path,
                      const std::map<std::string, std::string>& overrides);

// Canonical serialization covering every file key; doubles use enough
// precision to round-trip bit-exactly.
std::string serialize_config(const RunConfig& cfg);
void write_effective_config(const RunConfig& cfg, const std::string& path);

}  // namespace meclab::harness
