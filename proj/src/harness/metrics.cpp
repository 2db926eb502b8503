#include "meclab/harness/metrics.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace meclab::harness {

const char* const kMetricsHeader =
    "episode,reward,energy_j,latency_compute_s,latency_total_s,"
    "completion_rate,cum_objective";

std::string metrics_filename(baselines::PolicyKind policy, int servers) {
  return std::string("metrics_") + baselines::policy_name(policy) + "_n" +
         std::to_string(servers) + ".csv";
}

std::string checkpoint_filename(baselines::PolicyKind policy, int servers) {
  return std::string("checkpoint_") + baselines::policy_name(policy) + "_n" +
         std::to_string(servers) + ".bin";
}

std::string audit_log_filename(baselines::PolicyKind policy, int servers) {
  return std::string("audit_") + baselines::policy_name(policy) + "_n" +
         std::to_string(servers) + ".log";
}

std::string effective_config_filename(baselines::PolicyKind policy,
                                      int servers) {
  return std::string("effective_") + baselines::policy_name(policy) + "_n" +
         std::to_string(servers) + ".cfg";
}

MetricsWriter::MetricsWriter(const std::string& path)
    : path_(path), os_(path, std::ios::trunc) {
  if (!os_) throw std::runtime_error("cannot open metrics file: " + path);
  os_ << kMetricsHeader << '\n';
  os_.flush();
}

void MetricsWriter::append(const MetricRecord& r) {
  char line[256];
  std::snprintf(line, sizeof(line),
                "%ld,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", r.episode,
                r.reward, r.energy_j, r.latency_compute_s, r.latency_total_s,
                r.completion_rate, r.cum_objective);
  os_ << line;
  os_.flush();
  if (!os_) throw std::runtime_error("metrics write failed: " + path_);
}

std::vector<MetricRecord> read_metrics(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open metrics file: " + path);
  std::string line;
  if (!std::getline(is, line)) {
    throw std::runtime_error("metrics file empty: " + path);
  }
  if (line != kMetricsHeader) {
    throw std::runtime_error("metrics file " + path +
                             ": missing or wrong header row");
  }
  std::vector<MetricRecord> records;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    MetricRecord r;
    char comma;
    if (!(ss >> r.episode >> comma >> r.reward >> comma >> r.energy_j >>
          comma >> r.latency_compute_s >> comma >> r.latency_total_s >>
          comma >> r.completion_rate >> comma >> r.cum_objective)) {
      throw std::runtime_error("metrics file " + path + ": bad row '" + line +
                               "'");
    }
    records.push_back(r);
  }
  return records;
}

}  // namespace meclab::harness
