#include "meclab/marl/networks.hpp"

namespace meclab::marl {

namespace actor {

void init(ad::ParamSet& params, std::size_t obs_dim, std::size_t hidden,
          RandomStream& rng) {
  ad::dense::init(params, "trunk0", obs_dim, hidden, rng);
  ad::dense::init(params, "trunk1", hidden, hidden, rng);
  ad::dense::init(params, "pair", hidden, 3, rng);
  ad::dense::init(params, "cont", hidden, 2, rng);
}

namespace {

template <typename WeightFn>
Heads forward_impl(ad::Tape& tape, ad::Value obs, const ForwardOptions& opts,
                   WeightFn weight) {
  auto layer = [&](const char* prefix, ad::Value x) {
    return tape.add_row(tape.matmul(x, weight(std::string(prefix) + ".w")),
                        weight(std::string(prefix) + ".b"));
  };
  Heads h;
  ad::Value t0 = tape.relu(layer("trunk0", obs));
  ad::Value t1 = tape.relu(layer("trunk1", t0));
  h.logits = layer("pair", t1);
  ad::Value pre = layer("cont", t1);
  if (opts.sigma > 0.0) {
    if (opts.gauss_rng == nullptr) {
      throw std::invalid_argument("actor::forward: sigma > 0 needs an rng");
    }
    ad::Tensor noise(pre.rows(), pre.cols());
    for (std::size_t i = 0; i < noise.size(); ++i) {
      noise.data()[i] = opts.sigma * opts.gauss_rng->normal();
    }
    pre = tape.add(pre, tape.constant(noise));
  }
  ad::Value squashed = tape.sigmoid(pre);
  h.split = tape.slice_cols(squashed, 0, 1);
  h.power_u = tape.slice_cols(squashed, 1, 1);
  h.discrete = tape.gumbel_softmax(h.logits, opts.temperature, opts.hard,
                                   opts.gumbel_rng);
  h.action =
      tape.concat_cols(tape.concat_cols(h.discrete, h.split), h.power_u);
  return h;
}

}  // namespace

Heads forward(ad::Tape& tape, ad::ParamSet& params, ad::Value obs,
              const ForwardOptions& opts) {
  return forward_impl(tape, obs, opts, [&](const std::string& name) {
    return tape.param(params, name);
  });
}

Heads forward_frozen(ad::Tape& tape, const ad::ParamSet& params, ad::Value obs,
                     const ForwardOptions& opts) {
  return forward_impl(tape, obs, opts, [&](const std::string& name) {
    return tape.constant(params.entry(name).value);
  });
}

}  // namespace actor

namespace critic {

void init(ad::ParamSet& params, std::size_t input_dim, std::size_t hidden,
          RandomStream& rng) {
  ad::dense::init(params, "q0", input_dim, hidden, rng);
  ad::dense::init(params, "q1", hidden, hidden, rng);
  ad::dense::init(params, "q2", hidden, 1, rng);
}

ad::Value forward(ad::Tape& tape, ad::ParamSet& params, ad::Value input) {
  ad::Value h0 = tape.relu(ad::dense::forward(tape, params, "q0", input));
  ad::Value h1 = tape.relu(ad::dense::forward(tape, params, "q1", h0));
  return ad::dense::forward(tape, params, "q2", h1);
}

ad::Value forward_frozen(ad::Tape& tape, const ad::ParamSet& params,
                         ad::Value input) {
  auto layer = [&](const char* prefix, ad::Value x) {
    ad::Value w = tape.constant(params.entry(std::string(prefix) + ".w").value);
    ad::Value b = tape.constant(params.entry(std::string(prefix) + ".b").value);
    return tape.add_row(tape.matmul(x, w), b);
  };
  ad::Value h0 = tape.relu(layer("q0", input));
  ad::Value h1 = tape.relu(layer("q1", h0));
  return layer("q2", h1);
}

}  // namespace critic

ActionSample sample_action(ad::ParamSet& actor_params,
                           const std::vector<double>& obs,
                           const actor::ForwardOptions& opts,
                           const mec::EnvConfig& cfg) {
  ad::Tape tape;
  ad::Value in = tape.constant(
      ad::Tensor::from(1, obs.size(), std::vector<double>(obs)));
  const actor::Heads heads = actor::forward(tape, actor_params, in, opts);

  ActionSample out;
  const ad::Tensor& a = heads.action.val();
  for (std::size_t i = 0; i < mec::kActionDim; ++i) {
    out.vec[i] = a.at(0, i);
  }
  out.action = mec::action_from_vector(out.vec, cfg);
  return out;
}

}  // namespace meclab::marl
