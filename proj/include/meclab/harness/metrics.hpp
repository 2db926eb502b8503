#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "meclab/baselines/policies.hpp"

namespace meclab::harness {

// One reporting-window row of the metrics file.
struct MetricRecord {
  long episode = 0;  // window-end episode index, 1-based
  double reward = 0.0;
  double energy_j = 0.0;
  double latency_compute_s = 0.0;  // slower compute branch only
  double latency_total_s = 0.0;    // transmission included
  double completion_rate = 0.0;
  double cum_objective = 0.0;  // running cost sum since episode 1
};

extern const char* const kMetricsHeader;

std::string metrics_filename(baselines::PolicyKind policy, int servers);
std::string checkpoint_filename(baselines::PolicyKind policy, int servers);
std::string audit_log_filename(baselines::PolicyKind policy, int servers);
std::string effective_config_filename(baselines::PolicyKind policy,
                                      int servers);

// Append-only writer; each record is flushed so an aborted run keeps its
// last good rows.
class MetricsWriter {
 public:
  explicit MetricsWriter(const std::string& path);
  void append(const MetricRecord& r);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream os_;
};

std::vector<MetricRecord> read_metrics(const std::string& path);

}  // namespace meclab::harness
