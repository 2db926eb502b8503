#include "meclab/ad/params.hpp"

#include <cmath>
#include <stdexcept>

namespace meclab::ad {

Tensor& ParamSet::add(std::string name, Tensor init) {
  if (index_.count(name) != 0) {
    throw std::invalid_argument("ParamSet::add: duplicate name " + name);
  }
  index_.emplace(name, entries_.size());
  ParamEntry e;
  e.name = std::move(name);
  e.grad = Tensor(init.rows(), init.cols());
  e.m1 = Tensor(init.rows(), init.cols());
  e.m2 = Tensor(init.rows(), init.cols());
  e.value = std::move(init);
  entries_.push_back(std::move(e));
  return entries_.back().value;
}

ParamEntry& ParamSet::entry(std::string_view name) {
  auto it = index_.find(name);
  if (it == index_.end()) {
    throw std::invalid_argument("ParamSet::entry: unknown name " +
                                std::string(name));
  }
  return entries_[it->second];
}

const ParamEntry& ParamSet::entry(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) {
    throw std::invalid_argument("ParamSet::entry: unknown name " +
                                std::string(name));
  }
  return entries_[it->second];
}

bool ParamSet::contains(std::string_view name) const {
  return index_.find(name) != index_.end();
}

void ParamSet::zero_grads() {
  for (auto& e : entries_) e.grad.fill(0.0);
}

std::size_t ParamSet::value_count() const {
  std::size_t n = 0;
  for (const auto& e : entries_) n += e.value.size();
  return n;
}

Tensor fan_in_uniform(std::size_t rows, std::size_t cols, std::size_t fan_in,
                      RandomStream& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  Tensor t(rows, cols);
  for (std::size_t i = 0; i < t.size(); ++i) {
    t.data()[i] = rng.uniform(-bound, bound);
  }
  return t;
}

void AdamOptimizer::step(ParamSet& params) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (auto& e : params.entries()) {
    double* w = e.value.data();
    double* g = e.grad.data();
    double* m = e.m1.data();
    double* v = e.m2.data();
    for (std::size_t i = 0; i < e.value.size(); ++i) {
      m[i] = beta1_ * m[i] + (1.0 - beta1_) * g[i];
      v[i] = beta2_ * v[i] + (1.0 - beta2_) * g[i] * g[i];
      const double mhat = m[i] / c1;
      const double vhat = v[i] / c2;
      w[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
      g[i] = 0.0;
    }
  }
}

void soft_update(ParamSet& target, const ParamSet& online, double tau) {
  if (target.size() != online.size()) {
    throw std::invalid_argument("soft_update: parameter sets differ in size");
  }
  for (std::size_t i = 0; i < target.size(); ++i) {
    auto& t = target.entries()[i];
    const auto& o = online.entries()[i];
    if (t.name != o.name || !t.value.same_shape(o.value)) {
      throw std::invalid_argument("soft_update: mismatched entry " + t.name);
    }
    double* tv = t.value.data();
    const double* ov = o.value.data();
    for (std::size_t j = 0; j < t.value.size(); ++j) {
      tv[j] = tau * ov[j] + (1.0 - tau) * tv[j];
    }
  }
}

ParamSet clone_params(const ParamSet& src) {
  ParamSet out;
  for (const auto& e : src.entries()) {
    out.add(e.name, e.value);
  }
  return out;
}

}  // namespace meclab::ad
