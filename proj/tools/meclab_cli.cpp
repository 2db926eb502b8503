// Command-line front end: train / eval / sweep / plotdata subcommands over
// the experiment harness.

#include <CLI11.hpp>
#include <iostream>

#include "meclab/harness/runner.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string policy;
  std::string out_dir;
  std::string checkpoint;
  int servers = -1;
  int devices = -1;
  long episodes = -1;
  long seed = -1;
  bool audit = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "configuration file path");
  cmd->add_option("--policy", args.policy, "policy: tg|ablation|rop|foo");
  cmd->add_option("--servers", args.servers, "edge server count");
  cmd->add_option("--devices", args.devices, "mobile device count");
  cmd->add_option("--episodes", args.episodes, "episode count");
  cmd->add_option("--seed", args.seed, "run seed");
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_flag("--audit", args.audit, "write per-slot constraint audit logs");
  cmd->add_option("--checkpoint", args.checkpoint,
                  "checkpoint to restore before running");
}

meclab::harness::RunConfig build_config(const CommonArgs& args,
                                        meclab::harness::RunMode mode) {
  std::map<std::string, std::string> overrides;
  if (!args.policy.empty()) overrides["policy"] = args.policy;
  if (args.servers >= 0) overrides["servers"] = std::to_string(args.servers);
  if (args.devices >= 0) overrides["devices"] = std::to_string(args.devices);
  if (args.episodes >= 0) {
    overrides["episodes"] = std::to_string(args.episodes);
  }
  if (args.seed >= 0) overrides["seed"] = std::to_string(args.seed);
  if (!args.out_dir.empty()) overrides["out_dir"] = args.out_dir;
  if (args.audit) overrides["audit"] = "true";
  if (!args.checkpoint.empty()) overrides["checkpoint_in"] = args.checkpoint;

  meclab::harness::RunConfig cfg =
      meclab::harness::load_config(args.config_path, overrides);
  cfg.mode = mode;
  return cfg;
}

void report(const std::vector<meclab::harness::RunResult>& results) {
  for (const auto& r : results) {
    std::cout << "metrics: " << r.metrics_path << '\n';
    if (!r.checkpoint_path.empty()) {
      std::cout << "checkpoint: " << r.checkpoint_path << '\n';
    }
    if (!r.records.empty()) {
      const auto& last = r.records.back();
      std::cout << "final window: episode " << last.episode << " reward "
                << last.reward << " energy_j " << last.energy_j
                << " completion " << last.completion_rate << '\n';
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slot-based edge offloading laboratory"};
  app.require_subcommand(1);

  CommonArgs train_args, eval_args, sweep_args;
  std::string plot_dir;

  CLI::App* train = app.add_subcommand("train", "train a policy");
  add_common(train, train_args);
  CLI::App* eval = app.add_subcommand("eval", "frozen-policy evaluation");
  add_common(eval, eval_args);
  CLI::App* sweep =
      app.add_subcommand("sweep", "run the server-count sweep list");
  add_common(sweep, sweep_args);
  CLI::App* plot =
      app.add_subcommand("plotdata", "emit plot-ready tables from metrics");
  plot->add_option("--out", plot_dir, "directory holding metrics_*.csv")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      report({meclab::harness::run(
          build_config(train_args, meclab::harness::RunMode::train))});
    } else if (eval->parsed()) {
      report({meclab::harness::run(
          build_config(eval_args, meclab::harness::RunMode::eval))});
    } else if (sweep->parsed()) {
      report(meclab::harness::run_sweep(
          build_config(sweep_args, meclab::harness::RunMode::train)));
    } else if (plot->parsed()) {
      for (const auto& path : meclab::harness::emit_plot_data(plot_dir)) {
        std::cout << "wrote: " << path << '\n';
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
