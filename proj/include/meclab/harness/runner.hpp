#pragma once

#include "meclab/harness/config.hpp"
#include "meclab/harness/metrics.hpp"

namespace meclab::harness {

struct RunResult {
  std::string metrics_path;
  std::string checkpoint_path;  // empty for non-learning policies
  std::vector<MetricRecord> records;
};

// Executes one configured run: training for the learning policies in train
// mode, frozen rollouts otherwise. Writes the effective config echo, the
// stride-aggregated metrics file, a final checkpoint for learned policies
// and, when enabled, the per-slot audit log.
RunResult run(const RunConfig& cfg);

// One run per entry of the server-count sweep list; seeds stay fixed so the
// sweep is matched across policies.
std::vector<RunResult> run_sweep(const RunConfig& cfg);

// Produces plot-ready tables from every metrics file found in a directory:
// per-metric episode curves (one column per policy) and per-metric
// server-count summaries of the final-window mean (last 50 episodes).
std::vector<std::string> emit_plot_data(const std::string& dir);

}  // namespace meclab::harness
