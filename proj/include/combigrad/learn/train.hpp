#pragma once

#include <cstddef>
#include <functional>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "combigrad/learn/config.hpp"
#include "combigrad/learn/model.hpp"

namespace combigrad::learn {

struct Example {
  Tensor features;  // [items, feature_dim]
  Indicator label;
};

// Task accuracy of a prediction for example `index` of a split.
using AccuracyFn = std::function<bool(std::size_t index, const Indicator& prediction)>;

struct Split {
  std::vector<Example> examples;
  AccuracyFn accurate;  // empty: exact match with the label
};

struct EpochMetrics {
  int epoch = 0;
  double train_loss = 0.0;  // mean Hamming distance per example
  double test_loss = 0.0;
  double train_acc = 0.0;
  double test_acc = 0.0;
  double lr = 0.0;

  friend bool operator==(const EpochMetrics&, const EpochMetrics&) = default;
};

nlohmann::json to_json(const EpochMetrics& m);

struct TrainResult {
  std::vector<EpochMetrics> history;
  Model model;
};

using MetricsSink = std::function<void(const EpochMetrics&)>;

// Minibatch training with the blackbox solver layer. The batch loss is the mean
// Hamming distance, so each example's solver layer receives a loss gradient of
// +-1/batch. Examples of a batch run in parallel; their parameter gradients are
// summed in index order, so results do not depend on the thread count.
//
// Throws ConfigError for an invalid config or empty/inconsistent data, and
// DivergenceError (epoch and batch in the message) on a non-finite loss,
// gradient or parameter.
TrainResult train(const TrainConfig& config, const Split& train_split, const Split& test_split,
                  const MetricsSink& sink = {});

struct Evaluation {
  double loss = 0.0;
  double accuracy = 0.0;
  std::vector<Indicator> predictions;
};

Evaluation evaluate(const Model& model, const Solver& solver, const Split& split,
                    unsigned threads = 0);

// Writes one JSON object per line.
MetricsSink jsonl_sink(std::ostream& out);

}  // namespace combigrad::learn
