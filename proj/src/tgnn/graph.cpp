#include "meclab/tgnn/graph.hpp"

#include <algorithm>

#include "meclab/mec/formulas.hpp"

namespace meclab::tgnn {

namespace {

double norm_in_range(double v, const mec::Range& r) {
  if (!(r.hi > r.lo)) return 0.0;
  return std::clamp((v - r.lo) / (r.hi - r.lo), 0.0, 1.0);
}

}  // namespace

ad::Tensor node_features(const std::vector<mec::ServerState>& servers,
                         const mec::EnvConfig& cfg) {
  ad::Tensor f(servers.size(), kNodeFeatures);
  for (std::size_t i = 0; i < servers.size(); ++i) {
    const auto& s = servers[i];
    f.at(i, 0) = s.load_fraction();
    f.at(i, 1) = s.energy_fraction();
    f.at(i, 2) = norm_in_range(s.bandwidth_hz / 1e6, cfg.bandwidth_mhz);
    f.at(i, 3) = norm_in_range(s.position_km[0], cfg.coord_km);
    f.at(i, 4) = norm_in_range(s.position_km[1], cfg.coord_km);
  }
  return f;
}

double mean_link_quality(const std::vector<mec::ServerState>& servers,
                         std::size_t i) {
  if (servers.size() < 2) return 0.0;
  double acc = 0.0;
  for (std::size_t j = 0; j < servers.size(); ++j) {
    if (j == i) continue;
    const double d =
        mec::distance_km(servers[i].position_km, servers[j].position_km);
    acc += 1.0 / (1.0 + d);
  }
  return acc / static_cast<double>(servers.size() - 1);
}

ad::Tensor forecast_targets(const std::vector<mec::ServerState>& servers,
                            const mec::EnvConfig& cfg) {
  ad::Tensor t(servers.size(), kForecastFeatures);
  for (std::size_t i = 0; i < servers.size(); ++i) {
    const auto& s = servers[i];
    t.at(i, 0) = s.load_fraction();
    t.at(i, 1) = s.energy_fraction();
    t.at(i, 2) = norm_in_range(s.bandwidth_hz / 1e6, cfg.bandwidth_mhz);
    t.at(i, 3) = mean_link_quality(servers, i);
  }
  return t;
}

GraphSnapshot build_graph(const std::vector<mec::ServerState>& servers,
                          const mec::EnvConfig& cfg) {
  if (servers.empty()) {
    throw std::invalid_argument("build_graph: at least one server required");
  }
  const std::size_t n = servers.size();
  GraphSnapshot g;
  g.node_features = node_features(servers, cfg);

  // symmetric inverse-distance weights with unit self-loops, then row
  // normalization so each row is a distribution over neighbors
  ad::Tensor w(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    w.at(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d =
          mec::distance_km(servers[i].position_km, servers[j].position_km);
      const double weight = 1.0 / (1.0 + d);
      w.at(i, j) = weight;
      w.at(j, i) = weight;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double degree = 0.0;
    for (std::size_t j = 0; j < n; ++j) degree += w.at(i, j);
    for (std::size_t j = 0; j < n; ++j) w.at(i, j) /= degree;
  }
  g.adjacency = std::move(w);
  return g;
}

void TemporalBuffer::push(GraphSnapshot snapshot) {
  items_.push_back(std::move(snapshot));
  while (items_.size() > capacity_) items_.pop_front();
}

}  // namespace meclab::tgnn
