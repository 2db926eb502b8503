#pragma once

// Synthetic order-1 autoregressive server-state stream used to measure
// predictor skill against the persistence baseline (predict the last
// observed state). Shared by the unit suite and the acceptance gate.

#include <vector>

#include "meclab/rng.hpp"
#include "meclab/tgnn/graph.hpp"
#include "meclab/tgnn/predictor.hpp"

namespace tgnn_synth {

struct SkillResult {
  double model_mse = 0.0;
  double persistence_mse = 0.0;
  double ratio() const { return model_mse / persistence_mse; }
};

struct Process {
  meclab::mec::EnvConfig cfg;
  std::vector<std::vector<meclab::mec::ServerState>> states;  // per slot
};

// Latent per-server feature chain: v' = mu + a (v - mu) + sigma * noise,
// clamped into the unit interval. Every forecast feature stays genuinely
// time-varying (positions drift, so mean link quality moves too).
inline Process make_process(int servers, int slots, std::uint64_t seed,
                            double a = 0.3, double sigma = 0.12) {
  using namespace meclab;
  Process p;
  p.cfg.num_servers = servers;
  p.cfg.coord_km = {0.0, 4.0};

  RandomStream rng(seed);
  const double mu = 0.5;
  // latent rows: load, energy, bw, x, y per server
  std::vector<std::array<double, 5>> latent(servers);
  for (auto& row : latent) {
    for (auto& v : row) v = rng.uniform(0.3, 0.7);
  }
  auto snapshot = [&]() {
    std::vector<mec::ServerState> s(servers);
    for (int i = 0; i < servers; ++i) {
      auto& srv = s[i];
      srv.capacity_hz = 1e10;
      srv.initial_energy_j = p.cfg.initial_energy_j;
      srv.load_hz = latent[i][0] * srv.capacity_hz;
      srv.energy_j = latent[i][1] * srv.initial_energy_j;
      srv.bandwidth_hz =
          (p.cfg.bandwidth_mhz.lo +
           latent[i][2] * (p.cfg.bandwidth_mhz.hi - p.cfg.bandwidth_mhz.lo)) *
          1e6;
      srv.position_km = {
          p.cfg.coord_km.lo +
              latent[i][3] * (p.cfg.coord_km.hi - p.cfg.coord_km.lo),
          p.cfg.coord_km.lo +
              latent[i][4] * (p.cfg.coord_km.hi - p.cfg.coord_km.lo)};
    }
    return s;
  };
  for (int t = 0; t < slots; ++t) {
    p.states.push_back(snapshot());
    for (auto& row : latent) {
      for (auto& v : row) {
        v = mu + a * (v - mu) + sigma * rng.normal();
        v = std::clamp(v, 0.02, 0.98);
      }
    }
  }
  return p;
}

// Trains a predictor on the head of the stream and scores it on the tail.
inline SkillResult run_skill_benchmark(std::uint64_t seed, int servers = 4,
                                       int slots = 400, int train_end = 340,
                                       int epochs = 6, int batch = 8) {
  using namespace meclab;
  const Process p = make_process(servers, slots, seed);
  const std::size_t k_hist = 5;

  // (buffer ending at t, realized features at t+1) pairs
  std::vector<std::pair<tgnn::TemporalBuffer, ad::Tensor>> train_pairs,
      test_pairs;
  tgnn::TemporalBuffer rolling(k_hist);
  for (int t = 0; t < slots - 1; ++t) {
    rolling.push(tgnn::build_graph(p.states[t], p.cfg));
    if (!rolling.full()) continue;
    auto target = tgnn::forecast_targets(p.states[t + 1], p.cfg);
    if (t < train_end) {
      train_pairs.emplace_back(rolling, std::move(target));
    } else {
      test_pairs.emplace_back(rolling, std::move(target));
    }
  }

  tgnn::StatePredictor predictor(32, 3, mix_seed(seed, 0x9AE));
  ad::AdamOptimizer opt(3e-3);
  for (int e = 0; e < epochs; ++e) {
    for (std::size_t i = 0; i < train_pairs.size();
         i += static_cast<std::size_t>(batch)) {
      const std::size_t hi =
          std::min(train_pairs.size(), i + static_cast<std::size_t>(batch));
      std::vector<std::pair<tgnn::TemporalBuffer, ad::Tensor>> chunk(
          train_pairs.begin() + static_cast<std::ptrdiff_t>(i),
          train_pairs.begin() + static_cast<std::ptrdiff_t>(hi));
      predictor.train_step(chunk, opt);
    }
  }

  // Test pairs cover t = train_end .. slots-2. Persistence forecasts the
  // features observed at t for the state at t+1.
  SkillResult res;
  std::size_t n_terms = 0;
  std::size_t idx = 0;
  for (int t = train_end; t < slots - 1; ++t, ++idx) {
    const auto& [buffer, target] = test_pairs.at(idx);
    const tgnn::Forecast f = predictor.predict(buffer);
    const ad::Tensor now = tgnn::forecast_targets(p.states[t], p.cfg);
    for (std::size_t i = 0; i < target.size(); ++i) {
      const double dm = f.predicted.data()[i] - target.data()[i];
      const double dp = now.data()[i] - target.data()[i];
      res.model_mse += dm * dm;
      res.persistence_mse += dp * dp;
      ++n_terms;
    }
  }
  res.model_mse /= static_cast<double>(n_terms);
  res.persistence_mse /= static_cast<double>(n_terms);
  return res;
}

}  // namespace tgnn_synth
