#pragma once

// Central finite-difference gradient oracle shared by the unit and
// acceptance suites: analytic gradients from one backward pass compared
// against (f(w+e) - f(w-e)) / 2e for every parameter coordinate.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "meclab/ad/nn.hpp"
#include "meclab/ad/params.hpp"
#include "meclab/ad/tape.hpp"
#include "meclab/rng.hpp"
#include "meclab/tgnn/predictor.hpp"

namespace grad_check {

using meclab::RandomStream;
using meclab::ad::ParamSet;
using meclab::ad::Tape;
using meclab::ad::Tensor;
using meclab::ad::Value;

inline Tensor rand_tensor(std::size_t r, std::size_t c, RandomStream& rng,
                          double lo = -2.0, double hi = 2.0) {
  Tensor t(r, c);
  for (std::size_t i = 0; i < t.size(); ++i) t.data()[i] = rng.uniform(lo, hi);
  return t;
}

// Magnitudes bounded away from zero keep kinked ops differentiable at the
// probe points.
inline Tensor rand_tensor_off_zero(std::size_t r, std::size_t c,
                                   RandomStream& rng) {
  Tensor t(r, c);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double mag = rng.uniform(0.2, 2.0);
    t.data()[i] = rng.uniform01() < 0.5 ? -mag : mag;
  }
  return t;
}

using LossBuilder = std::function<Value(Tape&, ParamSet&)>;

inline double max_rel_error(ParamSet& ps, const LossBuilder& build,
                            double eps = 1e-5) {
  ps.zero_grads();
  {
    Tape tape;
    tape.backward(build(tape, ps));
  }
  double worst = 0.0;
  for (auto& e : ps.entries()) {
    for (std::size_t i = 0; i < e.value.size(); ++i) {
      const double orig = e.value.data()[i];
      e.value.data()[i] = orig + eps;
      double lp;
      {
        Tape tape;
        lp = build(tape, ps).item();
      }
      e.value.data()[i] = orig - eps;
      double lm;
      {
        Tape tape;
        lm = build(tape, ps).item();
      }
      e.value.data()[i] = orig;
      const double fd = (lp - lm) / (2.0 * eps);
      const double g = e.grad.data()[i];
      const double denom = std::max({std::fabs(fd), std::fabs(g), 1e-3});
      worst = std::max(worst, std::fabs(fd - g) / denom);
    }
  }
  ps.zero_grads();
  return worst;
}

struct CaseResult {
  std::string name;
  double worst = 0.0;
  int cases = 0;
};

// Runs `cases` random instances of every primitive op and composite layer;
// returns per-op worst relative errors.
inline std::vector<CaseResult> run_all(int cases, std::uint64_t seed) {
  std::vector<CaseResult> results;
  RandomStream rng(seed);

  auto run_case = [&](const char* name, auto make) {
    CaseResult r;
    r.name = name;
    for (int k = 0; k < cases; ++k) {
      ParamSet ps;
      LossBuilder build = make(ps);
      r.worst = std::max(r.worst, max_rel_error(ps, build));
      ++r.cases;
    }
    results.push_back(std::move(r));
  };

  run_case("matmul", [&](ParamSet& ps) {
    ps.add("a", rand_tensor(2, 3, rng));
    ps.add("b", rand_tensor(3, 4, rng));
    Tensor w = rand_tensor(2, 4, rng);
    return LossBuilder([w](Tape& t, ParamSet& p) {
      return t.sum(
          t.mul(t.matmul(t.param(p, "a"), t.param(p, "b")), t.constant(w)));
    });
  });
  run_case("add_sub_scale", [&](ParamSet& ps) {
    ps.add("a", rand_tensor(3, 3, rng));
    ps.add("b", rand_tensor(3, 3, rng));
    Tensor w = rand_tensor(3, 3, rng);
    return LossBuilder([w](Tape& t, ParamSet& p) {
      Value a = t.param(p, "a");
      Value b = t.param(p, "b");
      return t.sum(t.mul(t.sub(t.add(a, t.scale(b, 0.7)), b), t.constant(w)));
    });
  });
  run_case("mul", [&](ParamSet& ps) {
    ps.add("a", rand_tensor(2, 5, rng));
    ps.add("b", rand_tensor(2, 5, rng));
    Tensor w = rand_tensor(2, 5, rng);
    return LossBuilder([w](Tape& t, ParamSet& p) {
      return t.sum(
          t.mul(t.mul(t.param(p, "a"), t.param(p, "b")), t.constant(w)));
    });
  });
  run_case("add_row", [&](ParamSet& ps) {
    ps.add("a", rand_tensor(4, 3, rng));
    ps.add("r", rand_tensor(1, 3, rng));
    Tensor w = rand_tensor(4, 3, rng);
    return LossBuilder([w](Tape& t, ParamSet& p) {
      return t.sum(
          t.mul(t.add_row(t.param(p, "a"), t.param(p, "r")), t.constant(w)));
    });
  });
  run_case("relu", [&](ParamSet& ps) {
    ps.add("a", rand_tensor_off_zero(3, 4, rng));
    Tensor w = rand_tensor(3, 4, rng);
    return LossBuilder([w](Tape& t, ParamSet& p) {
      return t.sum(t.mul(t.relu(t.param(p, "a")), t.constant(w)));
    });
  });
  run_case("sigmoid_tanh", [&](ParamSet& ps) {
    ps.add("a", rand_tensor(2, 6, rng));
    Tensor w = rand_tensor(2, 6, rng);
    return LossBuilder([w](Tape& t, ParamSet& p) {
      Value a = t.param(p, "a");
      return t.sum(t.mul(t.add(t.sigmoid(a), t.tanh(a)), t.constant(w)));
    });
  });
  run_case("softmax_rows", [&](ParamSet& ps) {
    ps.add("a", rand_tensor(3, 4, rng));
    Tensor w = rand_tensor(3, 4, rng);
    return LossBuilder([w](Tape& t, ParamSet& p) {
      return t.sum(t.mul(t.softmax_rows(t.param(p, "a")), t.constant(w)));
    });
  });
  run_case("concat_slice", [&](ParamSet& ps) {
    ps.add("a", rand_tensor(2, 3, rng));
    ps.add("b", rand_tensor(2, 4, rng));
    Tensor w = rand_tensor(2, 7, rng);
    return LossBuilder([w](Tape& t, ParamSet& p) {
      Value cat = t.concat_cols(t.param(p, "a"), t.param(p, "b"));
      return t.add(t.mean(t.slice_cols(cat, 1, 5)),
                   t.sum(t.mul(cat, t.constant(w))));
    });
  });
  run_case("sum_mean_mse", [&](ParamSet& ps) {
    ps.add("a", rand_tensor(3, 3, rng));
    Tensor target = rand_tensor(3, 3, rng);
    return LossBuilder([target](Tape& t, ParamSet& p) {
      Value a = t.param(p, "a");
      return t.add(t.mse(a, t.constant(target)),
                   t.add(t.scale(t.sum(a), 0.1), t.mean(a)));
    });
  });
  run_case("gumbel_soft_path", [&](ParamSet& ps) {
    ps.add("logits", rand_tensor(2, 3, rng));
    Tensor w = rand_tensor(2, 3, rng);
    const double temp = rng.uniform(0.5, 2.0);
    return LossBuilder([w, temp](Tape& t, ParamSet& p) {
      Value g = t.gumbel_softmax(t.param(p, "logits"), temp, false, nullptr);
      return t.sum(t.mul(g, t.constant(w)));
    });
  });
  run_case("dense_layer", [&](ParamSet& ps) {
    meclab::ad::dense::init(ps, "d", 4, 3, rng);
    Tensor x = rand_tensor(5, 4, rng);
    Tensor w = rand_tensor(5, 3, rng);
    return LossBuilder([x, w](Tape& t, ParamSet& p) {
      return t.sum(t.mul(
          t.relu(meclab::ad::dense::forward(t, p, "d", t.constant(x))),
          t.constant(w)));
    });
  });
  run_case("gru_cell", [&](ParamSet& ps) {
    meclab::ad::gru::init(ps, "g", 4, 5, rng);
    Tensor x = rand_tensor(3, 4, rng);
    Tensor h = rand_tensor(3, 5, rng, -0.9, 0.9);
    Tensor w = rand_tensor(3, 5, rng);
    return LossBuilder([x, h, w](Tape& t, ParamSet& p) {
      Value next =
          meclab::ad::gru::forward(t, p, "g", t.constant(x), t.constant(h));
      return t.sum(t.mul(next, t.constant(w)));
    });
  });
  run_case("graph_layer", [&](ParamSet& ps) {
    const std::size_t nodes = 4, hidden = 6;
    ps.add("ws", rand_tensor(meclab::tgnn::kNodeFeatures, hidden, rng));
    ps.add("wt", rand_tensor(meclab::tgnn::kNodeFeatures, hidden, rng));
    Tensor h = rand_tensor(nodes, meclab::tgnn::kNodeFeatures, rng);
    Tensor phi = rand_tensor(nodes, hidden, rng);
    // row-stochastic adjacency with self loops
    Tensor adj(nodes, nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
      double total = 0.0;
      for (std::size_t j = 0; j < nodes; ++j) {
        adj.at(i, j) = rng.uniform(0.1, 1.0);
        total += adj.at(i, j);
      }
      for (std::size_t j = 0; j < nodes; ++j) adj.at(i, j) /= total;
    }
    Tensor w = rand_tensor(nodes, hidden, rng);
    return LossBuilder([h, phi, adj, w](Tape& t, ParamSet& p) {
      Value spatial = t.matmul(t.constant(adj),
                               t.matmul(t.constant(h), t.param(p, "ws")));
      Value temporal =
          t.mul(t.constant(phi), t.matmul(t.constant(h), t.param(p, "wt")));
      Value out = t.relu(t.add(spatial, temporal));
      return t.sum(t.mul(out, t.constant(w)));
    });
  });

  return results;
}

}  // namespace grad_check
