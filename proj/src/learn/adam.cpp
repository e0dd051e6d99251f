#include "combigrad/learn/adam.hpp"

#include <cmath>

#include "combigrad/error.hpp"

namespace combigrad::learn {

Adam::Adam(AdamConfig config, const std::vector<Tensor*>& params) : config_(std::move(config)) {
  if (!(config_.lr > 0.0)) throw ConfigError("learning rate must be positive");
  if (!(config_.beta1 >= 0.0 && config_.beta1 < 1.0 && config_.beta2 >= 0.0 &&
        config_.beta2 < 1.0)) {
    throw ConfigError("Adam betas must lie in [0, 1)");
  }
  if (!(config_.eps > 0.0)) throw ConfigError("Adam eps must be positive");
  for (const Tensor* p : params) {
    m_.emplace_back(p->size(), 0.0);
    v_.emplace_back(p->size(), 0.0);
  }
}

double Adam::lr_at(int epoch) const {
  double lr = config_.lr;
  for (int drop : config_.lr_drops) {
    if (epoch >= drop) lr /= 10.0;
  }
  return lr;
}

void Adam::step(const std::vector<Tensor*>& params, const std::vector<Tensor>& grads, int epoch) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw InputError("Adam step: parameter count changed");
  }
  ++t_;
  const double lr = lr_at(epoch);
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  for (std::size_t p = 0; p < params.size(); ++p) {
    std::vector<double>& data = params[p]->data;
    const std::vector<double>& g = grads[p].data;
    if (g.size() != data.size()) throw InputError("Adam step: gradient shape mismatch");
    auto& m = m_[p];
    auto& v = v_[p];
    for (std::size_t i = 0; i < data.size(); ++i) {
      m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * g[i];
      v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * g[i] * g[i];
      data[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + config_.eps);
    }
  }
}

}  // namespace combigrad::learn
