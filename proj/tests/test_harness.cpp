#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "meclab/harness/config.hpp"
#include "meclab/harness/metrics.hpp"
#include "meclab/harness/runner.hpp"

using namespace meclab;
using namespace meclab::harness;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::path("harness_test_out") / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

RunConfig tiny_rop_config(const fs::path& out) {
  RunConfig cfg;
  cfg.policy = baselines::PolicyKind::rop;
  cfg.episodes = 100;
  cfg.report_stride = 20;
  cfg.env.num_servers = 3;
  cfg.env.num_devices = 2;
  cfg.out_dir = out.string();
  cfg.seed = 11;
  return cfg;
}

}  // namespace

TEST_CASE("load_config: table defaults, overrides, rejection") {
  const RunConfig cfg = load_config("", {});
  CHECK(cfg.env.beta == 0.1);
  CHECK(cfg.learner.tau == 0.01);
  CHECK(cfg.env.omega_energy == 1.0);
  CHECK(cfg.env.omega_delay == 2.0);
  CHECK(cfg.episodes == 2000);
  CHECK(cfg.slots_per_episode == 10);
  CHECK(cfg.report_stride == 20);
  CHECK(cfg.env.task_size_mb.lo == 30.0);
  CHECK(cfg.env.task_size_mb.hi == 50.0);
  CHECK(cfg.env.server_capacity_ghz.lo == 4.5);
  CHECK(cfg.env.bandwidth_mhz.hi == 25.0);
  CHECK(cfg.env.initial_energy_j == 10000.0);
  CHECK(cfg.env.power_dbm.hi == 50.0);
  CHECK(cfg.learner.actor_lr == 1e-3);
  CHECK(cfg.learner.critic_lr == 1e-2);
  CHECK(cfg.learner.actor_update_every == 100);
  CHECK(cfg.sweep_servers == std::vector<int>{3, 5, 10, 15});

  const RunConfig seven = load_config("", {{"servers", "7"}});
  CHECK(seven.env.num_servers == 7);

  CHECK_THROWS_WITH_AS(load_config("", {{"bandwidth_mhz", "-5 10"}}),
                       doctest::Contains("bandwidth_mhz"), ConfigError);
  CHECK_THROWS_WITH_AS(load_config("", {{"nonsense_key", "1"}}),
                       doctest::Contains("nonsense_key"), ConfigError);
  CHECK_THROWS_AS(load_config("", {{"episodes", "0"}}), ConfigError);
  CHECK_THROWS_AS(load_config("", {{"policy", "dqn"}}), ConfigError);
}

TEST_CASE("config file parsing: comments, ranges, bad lines") {
  const fs::path dir = fresh_dir("cfgparse");
  const fs::path file = dir / "test.cfg";
  {
    std::ofstream os(file.string());
    os << "# comment line\n"
       << "servers = 4   # trailing comment\n"
       << "task_size_mb = 10 20\n"
       << "audit = true\n"
       << "sweep_servers = 3 9\n";
  }
  const RunConfig cfg = load_config(file.string(), {});
  CHECK(cfg.env.num_servers == 4);
  CHECK(cfg.env.task_size_mb.lo == 10.0);
  CHECK(cfg.env.task_size_mb.hi == 20.0);
  CHECK(cfg.audit);
  CHECK(cfg.sweep_servers == std::vector<int>{3, 9});

  {
    std::ofstream os(file.string());
    os << "servers ~ 4\n";
  }
  CHECK_THROWS_AS(load_config(file.string(), {}), ConfigError);
  {
    std::ofstream os(file.string());
    os << "beta = abc\n";
  }
  CHECK_THROWS_WITH_AS(load_config(file.string(), {}),
                       doctest::Contains("beta"), ConfigError);
}

TEST_CASE("effective config echo round-trips identically") {
  RunConfig cfg = load_config(
      "", {{"servers", "6"},
           {"devices", "4"},
           {"beta", "0.17"},
           {"kappa", "3.3e-28"},
           {"sweep_servers", "3 5"},
           {"out_dir", "somewhere/else"},
           {"seed", "99"},
           {"audit", "true"},
           {"actor_lr", "0.00123"}});
  const fs::path dir = fresh_dir("echo");
  const fs::path echo = dir / "effective.cfg";
  write_effective_config(cfg, echo.string());
  const RunConfig back = load_config(echo.string(), {});
  CHECK(serialize_config(back) == serialize_config(cfg));
}

TEST_CASE("run: record count, byte-identical reruns, audit recompute") {
  const fs::path dir_a = fresh_dir("run_a");
  RunConfig cfg = tiny_rop_config(dir_a);
  cfg.audit = true;
  const RunResult a = run(cfg);
  CHECK(a.records.size() == 5);  // 100 episodes / stride 20
  CHECK(a.checkpoint_path.empty());

  const fs::path dir_b = fresh_dir("run_b");
  RunConfig cfg_b = cfg;
  cfg_b.out_dir = dir_b.string();
  const RunResult b = run(cfg_b);
  CHECK(slurp(a.metrics_path) == slurp(b.metrics_path));

  // completion rate per window is recomputable from the audit log
  const auto audit_path =
      (dir_a / audit_log_filename(cfg.policy, cfg.env.num_servers)).string();
  std::ifstream log(audit_path);
  REQUIRE(log.good());
  std::string line;
  std::getline(log, line);  // header
  std::vector<long> generated(5, 0), completed(5, 0);
  while (std::getline(log, line)) {
    long ep, slot, g, c;
    char comma;
    std::istringstream ss(line);
    ss >> ep >> comma >> slot >> comma >> g >> comma >> c;
    const std::size_t window = static_cast<std::size_t>(ep / 20);
    generated[window] += g;
    completed[window] += c;
  }
  for (std::size_t w = 0; w < 5; ++w) {
    CHECK(a.records[w].completion_rate ==
          doctest::Approx(double(completed[w]) / double(generated[w]))
              .epsilon(1e-12));
  }

  // cumulative objective is non-decreasing across records
  for (std::size_t i = 1; i < a.records.size(); ++i) {
    CHECK(a.records[i].cum_objective >= a.records[i - 1].cum_objective);
  }
}

TEST_CASE("run: partial final window still lands in the file") {
  const fs::path dir = fresh_dir("partial");
  RunConfig cfg = tiny_rop_config(dir);
  cfg.episodes = 50;
  cfg.report_stride = 20;
  const RunResult r = run(cfg);
  CHECK(r.records.size() == 3);  // ceil(50/20)
  CHECK(r.records.back().episode == 50);
  const auto parsed = read_metrics(r.metrics_path);
  CHECK(parsed.size() == 3);
}

TEST_CASE("sweep emits one metrics file per server count") {
  const fs::path dir = fresh_dir("sweep");
  RunConfig cfg = tiny_rop_config(dir);
  cfg.episodes = 20;
  cfg.sweep_servers = {3, 5};
  const auto results = run_sweep(cfg);
  REQUIRE(results.size() == 2);
  CHECK(fs::exists(dir / "metrics_rop_n3.csv"));
  CHECK(fs::exists(dir / "metrics_rop_n5.csv"));
}

TEST_CASE("metrics reader rejects a wrong header naming the file") {
  const fs::path dir = fresh_dir("badheader");
  const fs::path file = dir / "metrics_rop_n3.csv";
  {
    std::ofstream os(file.string());
    os << "episode,reward\n1,2\n";
  }
  CHECK_THROWS_WITH_AS(read_metrics(file.string()),
                       doctest::Contains("metrics_rop_n3.csv"),
                       std::runtime_error);
}

TEST_CASE("plotdata: tables, final-window oracle, stability") {
  const fs::path dir = fresh_dir("plot");
  RunConfig cfg = tiny_rop_config(dir);
  cfg.episodes = 100;
  cfg.sweep_servers = {3, 5};
  run_sweep(cfg);
  RunConfig foo_cfg = cfg;
  foo_cfg.policy = baselines::PolicyKind::foo;
  run_sweep(foo_cfg);

  const auto written = emit_plot_data(dir.string());
  CHECK(!written.empty());
  CHECK(fs::exists(dir / "plot_reward_vs_episode_n3.csv"));
  CHECK(fs::exists(dir / "plot_completion_rate_vs_servers.csv"));

  // header documents the columns
  {
    std::ifstream is((dir / "plot_reward_vs_episode_n3.csv").string());
    std::string header;
    std::getline(is, header);
    CHECK(header == "episode,rop,foo");
  }

  // the servers table's final-window mean equals a hand recomputation
  const auto records = read_metrics((dir / "metrics_rop_n5.csv").string());
  double acc = 0.0;
  int n = 0;
  for (const auto& r : records) {
    if (r.episode > records.back().episode - 50) {
      acc += r.energy_j;
      ++n;
    }
  }
  const double expected = acc / n;
  std::ifstream table((dir / "plot_energy_j_vs_servers.csv").string());
  std::string line;
  std::getline(table, line);
  CHECK(line == "servers,rop,foo");
  double got = -1.0;
  while (std::getline(table, line)) {
    std::istringstream ss(line);
    int servers;
    char comma;
    double rop_v, foo_v;
    ss >> servers >> comma >> rop_v >> comma >> foo_v;
    if (servers == 5) got = rop_v;
  }
  CHECK(got == doctest::Approx(expected).epsilon(1e-9));

  // rerun over the same inputs rewrites identical tables
  const std::string before = slurp((dir / "plot_reward_vs_episode_n3.csv").string());
  emit_plot_data(dir.string());
  CHECK(slurp((dir / "plot_reward_vs_episode_n3.csv").string()) == before);
}

TEST_CASE("train/eval checkpoint flow for a learned policy") {
  const fs::path dir = fresh_dir("ckpt");
  RunConfig cfg;
  cfg.policy = baselines::PolicyKind::tg_dcmaddpg;
  cfg.episodes = 3;
  cfg.report_stride = 1;
  cfg.env.num_servers = 3;
  cfg.env.num_devices = 2;
  cfg.learner.batch_size = 8;
  cfg.learner.actor_hidden = 16;
  cfg.learner.critic_hidden = 16;
  cfg.learner.gnn_hidden = 8;
  cfg.out_dir = dir.string();
  const RunResult trained = run(cfg);
  REQUIRE(!trained.checkpoint_path.empty());
  CHECK(fs::exists(trained.checkpoint_path));

  RunConfig eval_cfg = cfg;
  eval_cfg.mode = RunMode::eval;
  eval_cfg.checkpoint_in = trained.checkpoint_path;
  eval_cfg.out_dir = (dir / "eval").string();
  const RunResult evaluated = run(eval_cfg);
  CHECK(evaluated.records.size() == 3);
  CHECK(evaluated.checkpoint_path.empty());

  RunConfig missing = eval_cfg;
  missing.checkpoint_in.clear();
  CHECK_THROWS_AS(run(missing), ConfigError);
}

TEST_CASE("seeded eval reruns are byte-identical for every policy") {
  for (auto kind : {baselines::PolicyKind::rop, baselines::PolicyKind::foo}) {
    const fs::path d1 = fresh_dir(std::string("det1_") +
                                  baselines::policy_name(kind));
    const fs::path d2 = fresh_dir(std::string("det2_") +
                                  baselines::policy_name(kind));
    RunConfig cfg = tiny_rop_config(d1);
    cfg.policy = kind;
    cfg.episodes = 30;
    const RunResult r1 = run(cfg);
    cfg.out_dir = d2.string();
    const RunResult r2 = run(cfg);
    CHECK(slurp(r1.metrics_path) == slurp(r2.metrics_path));
  }
}
