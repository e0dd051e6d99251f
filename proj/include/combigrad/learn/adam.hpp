#pragma once

#include <cstddef>
#include <vector>

#include "combigrad/learn/tensor.hpp"

namespace combigrad::learn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  // 1-based epochs at whose start the learning rate is divided by 10.
  std::vector<int> lr_drops;
};

class Adam {
 public:
  Adam(AdamConfig config, const std::vector<Tensor*>& params);

  // Learning rate in effect during `epoch` (1-based).
  double lr_at(int epoch) const;

  // One update of every parameter; grads[i] matches params[i] in shape.
  void step(const std::vector<Tensor*>& params, const std::vector<Tensor>& grads, int epoch);

  long steps() const { return t_; }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  long t_ = 0;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
};

}  // namespace combigrad::learn
