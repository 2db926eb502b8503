#include "meclab/tgnn/predictor.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace meclab::tgnn {

using ad::Tape;
using ad::Tensor;
using ad::Value;

std::vector<double> augment_observation(const std::vector<double>& local_obs,
                                        const Forecast& forecast) {
  std::vector<double> out = local_obs;
  const Tensor& p = forecast.predicted;
  out.insert(out.end(), p.data(), p.data() + p.size());
  return out;
}

StatePredictor::StatePredictor(std::size_t hidden, std::size_t layers,
                               std::uint64_t seed)
    : hidden_(hidden), layers_(layers) {
  RandomStream rng(seed);
  ad::gru::init(params_, "gru", kNodeFeatures, hidden_, rng);
  for (std::size_t l = 0; l < layers_; ++l) {
    const std::size_t in = l == 0 ? kNodeFeatures : hidden_;
    const std::string prefix = "layer" + std::to_string(l);
    params_.add(prefix + ".ws", ad::fan_in_uniform(in, hidden_, in, rng));
    params_.add(prefix + ".wt", ad::fan_in_uniform(in, hidden_, in, rng));
  }
  ad::dense::init(params_, "head0", hidden_, hidden_, rng);
  ad::dense::init(params_, "head1", hidden_, kForecastFeatures, rng);
}

Value StatePredictor::temporal_encoding(Tape& tape,
                                        const TemporalBuffer& buffer) {
  if (buffer.empty()) {
    throw std::logic_error("temporal_encoding: buffer is empty");
  }
  const std::size_t nodes = buffer.at(0).node_features.rows();
  Value h = tape.constant(Tensor(nodes, hidden_));
  for (std::size_t k = 0; k < buffer.size(); ++k) {
    Value x = tape.constant(buffer.at(k).node_features);
    h = ad::gru::forward(tape, params_, "gru", x, h);
  }
  return h;
}

Value StatePredictor::layer_forward(Tape& tape, Value h, Value adjacency,
                                    Value phi, std::size_t layer) {
  const std::string prefix = "layer" + std::to_string(layer);
  Value ws = tape.param(params_, prefix + ".ws");
  Value wt = tape.param(params_, prefix + ".wt");
  Value spatial = tape.matmul(adjacency, tape.matmul(h, ws));
  Value temporal = tape.mul(phi, tape.matmul(h, wt));
  return tape.relu(tape.add(spatial, temporal));
}

Value StatePredictor::forward(Tape& tape, const TemporalBuffer& buffer) {
  if (!buffer.full()) {
    throw std::logic_error("forward: temporal buffer not yet full");
  }
  Value phi = temporal_encoding(tape, buffer);
  const GraphSnapshot& newest = buffer.newest();
  Value adjacency = tape.constant(newest.adjacency);
  Value h = tape.constant(newest.node_features);
  for (std::size_t l = 0; l < layers_; ++l) {
    h = layer_forward(tape, h, adjacency, phi, l);
  }
  Value hidden = tape.relu(ad::dense::forward(tape, params_, "head0", h));
  return ad::dense::forward(tape, params_, "head1", hidden);
}

Forecast StatePredictor::predict(const TemporalBuffer& buffer, int horizon) {
  Tape tape;
  Forecast f;
  f.horizon = horizon;
  f.predicted = forward(tape, buffer).val();
  for (std::size_t i = 0; i < f.predicted.size(); ++i) {
    f.predicted.data()[i] = std::clamp(f.predicted.data()[i], 0.0, 1.0);
  }
  return f;
}

double StatePredictor::train_step(
    const std::vector<std::pair<TemporalBuffer, Tensor>>& pairs,
    ad::AdamOptimizer& opt) {
  if (pairs.empty()) {
    throw std::invalid_argument("train_step: at least one pair required");
  }
  Tape tape;
  Value total;
  bool first = true;
  for (const auto& [buffer, target] : pairs) {
    Value loss = tape.mse(forward(tape, buffer), tape.constant(target));
    total = first ? loss : tape.add(total, loss);
    first = false;
  }
  Value mean_loss = tape.scale(total, 1.0 / static_cast<double>(pairs.size()));
  const double before = mean_loss.item();
  tape.backward(mean_loss);
  opt.step(params_);
  return before;
}

}  // namespace meclab::tgnn
