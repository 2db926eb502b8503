#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>

#include "meclab/harness/runner.hpp"

namespace meclab::harness {

namespace fs = std::filesystem;

namespace {

struct MetricColumn {
  const char* name;
  double MetricRecord::* field;
};

constexpr MetricColumn kColumns[] = {
    {"reward", &MetricRecord::reward},
    {"energy_j", &MetricRecord::energy_j},
    {"latency_compute_s", &MetricRecord::latency_compute_s},
    {"latency_total_s", &MetricRecord::latency_total_s},
    {"completion_rate", &MetricRecord::completion_rate},
    {"cum_objective", &MetricRecord::cum_objective},
};

constexpr baselines::PolicyKind kPolicyOrder[] = {
    baselines::PolicyKind::tg_dcmaddpg,
    baselines::PolicyKind::dc_maddpg_ablation,
    baselines::PolicyKind::rop,
    baselines::PolicyKind::foo,
};

struct ParsedName {
  baselines::PolicyKind policy;
  int servers;
};

bool parse_metrics_filename(const std::string& name, ParsedName& out) {
  if (name.rfind("metrics_", 0) != 0) return false;
  if (name.size() < 5 || name.substr(name.size() - 4) != ".csv") return false;
  const std::string core = name.substr(8, name.size() - 12);
  const auto sep = core.rfind("_n");
  if (sep == std::string::npos) return false;
  try {
    out.policy = baselines::parse_policy(core.substr(0, sep));
    out.servers = std::stoi(core.substr(sep + 2));
  } catch (const std::exception&) {
    return false;
  }
  return out.servers > 0;
}

double final_window_mean(const std::vector<MetricRecord>& records,
                         double MetricRecord::* field) {
  // final window: the last 50 episodes of the run
  const long max_episode = records.back().episode;
  const long cutoff = max_episode - 50;
  double acc = 0.0;
  long n = 0;
  for (const auto& r : records) {
    if (r.episode > cutoff) {
      acc += r.*field;
      ++n;
    }
  }
  return acc / static_cast<double>(n);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

std::vector<std::string> emit_plot_data(const std::string& dir) {
  // policy -> servers -> records
  std::map<int, std::map<int, std::vector<MetricRecord>>> by_policy;
  std::set<int> server_counts;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    ParsedName parsed;
    if (!parse_metrics_filename(entry.path().filename().string(), parsed)) {
      continue;
    }
    auto records = read_metrics(entry.path().string());
    if (records.empty()) {
      throw std::runtime_error("metrics file has no rows: " +
                               entry.path().string());
    }
    by_policy[static_cast<int>(parsed.policy)][parsed.servers] =
        std::move(records);
    server_counts.insert(parsed.servers);
  }
  if (by_policy.empty()) {
    throw std::runtime_error("no metrics_*.csv files found in " + dir);
  }

  std::vector<std::string> written;
  auto write_table = [&](const std::string& name, const std::string& header,
                         const std::vector<std::string>& rows) {
    const fs::path path = fs::path(dir) / name;
    std::ofstream os(path.string(), std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << header << '\n';
    for (const auto& r : rows) os << r << '\n';
    written.push_back(path.string());
  };

  // episode curves, one table per (metric, server count)
  for (int servers : server_counts) {
    std::vector<baselines::PolicyKind> present;
    for (auto kind : kPolicyOrder) {
      auto it = by_policy.find(static_cast<int>(kind));
      if (it != by_policy.end() && it->second.count(servers)) {
        present.push_back(kind);
      }
    }
    if (present.empty()) continue;
    const auto& episodes =
        by_policy[static_cast<int>(present.front())][servers];
    for (auto kind : present) {
      const auto& records = by_policy[static_cast<int>(kind)][servers];
      if (records.size() != episodes.size()) {
        throw std::runtime_error(
            std::string("episode grid mismatch for policy ") +
            baselines::policy_name(kind) + " at n" + std::to_string(servers));
      }
    }
    for (const auto& col : kColumns) {
      std::string header = "episode";
      for (auto kind : present) {
        header += ',';
        header += baselines::policy_name(kind);
      }
      std::vector<std::string> rows;
      for (std::size_t i = 0; i < episodes.size(); ++i) {
        std::string row = std::to_string(episodes[i].episode);
        for (auto kind : present) {
          row += ',';
          row += fmt(by_policy[static_cast<int>(kind)][servers][i].*col.field);
        }
        rows.push_back(std::move(row));
      }
      write_table("plot_" + std::string(col.name) + "_vs_episode_n" +
                      std::to_string(servers) + ".csv",
                  header, rows);
    }
  }

  // server-count summaries over the final window
  std::vector<baselines::PolicyKind> complete;
  for (auto kind : kPolicyOrder) {
    auto it = by_policy.find(static_cast<int>(kind));
    if (it == by_policy.end()) continue;
    bool all = true;
    for (int servers : server_counts) {
      if (!it->second.count(servers)) all = false;
    }
    if (all) complete.push_back(kind);
  }
  if (!complete.empty() && !server_counts.empty()) {
    for (const auto& col : kColumns) {
      std::string header = "servers";
      for (auto kind : complete) {
        header += ',';
        header += baselines::policy_name(kind);
      }
      std::vector<std::string> rows;
      for (int servers : server_counts) {
        std::string row = std::to_string(servers);
        for (auto kind : complete) {
          row += ',';
          row += fmt(final_window_mean(
              by_policy[static_cast<int>(kind)][servers], col.field));
        }
        rows.push_back(std::move(row));
      }
      write_table("plot_" + std::string(col.name) + "_vs_servers.csv", header,
                  rows);
    }
  }
  return written;
}

}  // namespace meclab::harness
