#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "combigrad/learn/adam.hpp"
#include "combigrad/solvers/registry.hpp"

namespace combigrad::learn {

struct RepellentConfig {
  int start = 0;  // 1-based inclusive epoch window; 0/0 disables
  int end = 0;
  double c = 0.0;

  bool active(int epoch) const { return c > 0.0 && epoch >= start && epoch <= end; }
};

// JSON fields: family, k, connectivity, approximate, lambda, lr, betas [b1, b2],
// eps, epochs, batch, seed, schedule, hidden, cost_floor, repellent {start, end, c},
// threads. Missing fields keep the family preset.
struct TrainConfig {
  solvers::InstanceSpec instance;
  double lambda = 20.0;
  AdamConfig adam;
  int epochs = 50;
  int batch = 70;
  std::uint64_t seed = 0;
  std::vector<int> hidden{16};
  // Shortest path only: predicted costs are relu(x) + cost_floor. Must exceed
  // lambda / batch so the perturbed costs stay positive.
  double cost_floor = 0.5;
  RepellentConfig repellent;
  unsigned threads = 0;  // 0 = hardware concurrency

  // Throws ConfigError on an unusable combination (lambda <= 0, empty batch, ...).
  void validate() const;
};

// Hyperparameters carried over from the reference experiments.
//   sp   Adam 5e-4, lambda 20, batch 70, 50 epochs, drops at 30 and 40
//   pm   Adam 1e-3, lambda 10, batch 70, 30 epochs, drops at 10 and 20
//   tsp  Adam 1e-4 (beta1 0.5, eps 1e-3), lambda 20, batch 50, 100 epochs,
//        drops at 80 and 90, repellent in epochs 15-30 with C_k by k
TrainConfig preset(solvers::Family family, int k);

// Repellent strength used with k cities: 2.0, 3.0, 6.0, 20.0 for k = 5, 10, 20, 40
// and the nearest listed k otherwise.
double repellent_strength(int k);

void to_json(nlohmann::json& j, const TrainConfig& c);
// Starts from preset(family, k) and overrides whatever fields are present.
TrainConfig train_config_from_json(const nlohmann::json& j);

}  // namespace combigrad::learn
