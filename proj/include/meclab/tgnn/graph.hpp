#pragma once

#include <deque>
#include <vector>

#include "meclab/ad/tensor.hpp"
#include "meclab/mec/types.hpp"

namespace meclab::tgnn {

// Node feature layout of one server snapshot (all normalized to [0,1]):
//   0 load fraction, 1 energy fraction, 2 bandwidth, 3 x, 4 y
constexpr std::size_t kNodeFeatures = 5;

// Forecast feature layout:
//   0 load fraction, 1 energy fraction, 2 bandwidth, 3 mean link quality
constexpr std::size_t kForecastFeatures = 4;

// One slot's server graph: per-node features plus the row-normalized
// connectivity matrix (inverse-distance weights, unit self-loops).
struct GraphSnapshot {
  ad::Tensor node_features;  // |V| x kNodeFeatures
  ad::Tensor adjacency;      // |V| x |V|, rows sum to 1
};

ad::Tensor node_features(const std::vector<mec::ServerState>& servers,
                         const mec::EnvConfig& cfg);

// Realized values of the forecast features for a server set.
ad::Tensor forecast_targets(const std::vector<mec::ServerState>& servers,
                            const mec::EnvConfig& cfg);

GraphSnapshot build_graph(const std::vector<mec::ServerState>& servers,
                          const mec::EnvConfig& cfg);

// Mean inverse-distance weight from node i to every other node; 0 for a
// single-node graph.
double mean_link_quality(const std::vector<mec::ServerState>& servers,
                         std::size_t i);

// Sliding window of the most recent snapshots, oldest first.
class TemporalBuffer {
 public:
  explicit TemporalBuffer(std::size_t capacity) : capacity_(capacity) {}

  void push(GraphSnapshot snapshot);
  void clear() { items_.clear(); }
  bool full() const { return items_.size() == capacity_; }
  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  const GraphSnapshot& at(std::size_t i) const { return items_.at(i); }
  const GraphSnapshot& newest() const { return items_.back(); }

 private:
  std::size_t capacity_;
  std::deque<GraphSnapshot> items_;
};

}  // namespace meclab::tgnn
