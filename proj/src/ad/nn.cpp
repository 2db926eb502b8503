#include "meclab/ad/nn.hpp"

namespace meclab::ad {

namespace dense {

void init(ParamSet& params, const std::string& prefix, std::size_t in,
          std::size_t out, RandomStream& rng) {
  params.add(prefix + ".w", fan_in_uniform(in, out, in, rng));
  params.add(prefix + ".b", Tensor(1, out));
}

Value forward(Tape& tape, ParamSet& params, const std::string& prefix,
              Value x) {
  Value w = tape.param(params, prefix + ".w");
  Value b = tape.param(params, prefix + ".b");
  return tape.add_row(tape.matmul(x, w), b);
}

}  // namespace dense

namespace gru {

void init(ParamSet& params, const std::string& prefix, std::size_t in,
          std::size_t hidden, RandomStream& rng) {
  for (const char* gate : {"z", "r", "c"}) {
    params.add(prefix + ".w" + gate, fan_in_uniform(in, hidden, in, rng));
    params.add(prefix + ".u" + gate,
               fan_in_uniform(hidden, hidden, hidden, rng));
    params.add(prefix + ".b" + gate, Tensor(1, hidden));
  }
}

Value forward(Tape& tape, ParamSet& params, const std::string& prefix,
              Value x, Value h) {
  auto gate = [&](const char* g, Value state) {
    Value w = tape.param(params, prefix + ".w" + g);
    Value u = tape.param(params, prefix + ".u" + g);
    Value b = tape.param(params, prefix + ".b" + g);
    return tape.add_row(
        tape.add(tape.matmul(x, w), tape.matmul(state, u)), b);
  };
  Value z = tape.sigmoid(gate("z", h));
  Value r = tape.sigmoid(gate("r", h));
  Value c = tape.tanh(gate("c", tape.mul(r, h)));
  // h' = z .* c + (1 - z) .* h = h + z .* (c - h)
  return tape.add(h, tape.mul(z, tape.sub(c, h)));
}

std::size_t hidden_size(const ParamSet& params, const std::string& prefix) {
  return params.entry(prefix + ".uz").value.cols();
}

}  // namespace gru

}  // namespace meclab::ad
