#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "combigrad/harness/dataset.hpp"
#include "combigrad/harness/metrics.hpp"
#include "combigrad/learn/train.hpp"

namespace combigrad::harness {

struct DataConfig {
  std::size_t train_size = 1000;
  std::size_t test_size = 200;
  int terrain_types = 5;   // sp
  double noise = 0.05;     // sp, pm
  std::size_t pool = 100;  // tsp
  std::size_t feature_dim = 128;  // tsp
};

// Training fields as in learn::TrainConfig plus an optional "data" object.
struct ExperimentConfig {
  learn::TrainConfig train;
  DataConfig data;
};

ExperimentConfig experiment_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& c);

// Preset for one family with the default data sizes.
ExperimentConfig experiment_preset(solvers::Family family, int k);

// Train and test examples from one generator run, so they share the hidden
// terrain costs or city pool.
SyntheticDataset make_dataset(const ExperimentConfig& config, std::uint64_t seed);

// Task accuracy: cost-optimality for sp and pm, exact tour match for tsp.
learn::Split make_split(const SyntheticDataset& data);

struct RunRecord {
  std::string config_hash;  // of the config without its seed
  std::uint64_t seed = 0;
  std::vector<learn::EpochMetrics> history;
  double final_train_acc = 0.0;
  double final_test_acc = 0.0;
  double wall_seconds = 0.0;
  std::optional<ProcrustesResult> procrustes;  // tsp: learned vs hidden city locations
  nlohmann::json model;
};

nlohmann::json to_json(const RunRecord& r);

// Generates the data with `seed`, trains with `seed`, and evaluates.
RunRecord run_experiment(const ExperimentConfig& config, std::uint64_t seed,
                         const learn::MetricsSink& sink = {});

struct SolverComparison {
  RunRecord exact;                // embedding the exact solver
  RunRecord approximate;          // embedding the 2-opt heuristic
  double approx_on_truth = 0.0;   // heuristic on hidden locations, test split
};

nlohmann::json to_json(const SolverComparison& c);

// TSP only: trains once with each solver on the same data and measures the
// heuristic's own ceiling on the hidden test locations.
SolverComparison compare_solvers(const ExperimentConfig& config, std::uint64_t seed,
                                 const learn::MetricsSink& sink = {});

std::string config_hash(const nlohmann::json& config);

}  // namespace combigrad::harness
