#pragma once

#include <string>

#include "meclab/ad/params.hpp"
#include "meclab/ad/tape.hpp"

namespace meclab::ad {

// Dense layer helpers. Parameters are registered as "<prefix>.w" (in x out)
// and "<prefix>.b" (1 x out); weights use fan-in uniform init, biases zero.
namespace dense {
void init(ParamSet& params, const std::string& prefix, std::size_t in,
          std::size_t out, RandomStream& rng);
// x (batch x in) -> x W + b (batch x out)
Value forward(Tape& tape, ParamSet& params, const std::string& prefix,
              Value x);
}  // namespace dense

// Gated recurrent cell with the standard update/reset/candidate gates:
//   z = sigmoid(x Wz + h Uz + bz)
//   r = sigmoid(x Wr + h Ur + br)
//   c = tanh(x Wc + (r .* h) Uc + bc)
//   h' = z .* c + (1 - z) .* h
namespace gru {
void init(ParamSet& params, const std::string& prefix, std::size_t in,
          std::size_t hidden, RandomStream& rng);
Value forward(Tape& tape, ParamSet& params, const std::string& prefix,
              Value x, Value h);
std::size_t hidden_size(const ParamSet& params, const std::string& prefix);
}  // namespace gru

}  // namespace meclab::ad
