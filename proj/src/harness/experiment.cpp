#include "combigrad/harness/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <memory>

#include "combigrad/error.hpp"
#include "combigrad/solvers/tsp.hpp"

namespace combigrad::harness {

using solvers::Family;

ExperimentConfig experiment_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  c.train = learn::train_config_from_json(j);
  c.data = experiment_preset(c.train.instance.family, c.train.instance.k).data;
  if (j.contains("data")) {
    try {
      const auto& d = j.at("data");
      c.data.train_size = d.value("train_size", c.data.train_size);
      c.data.test_size = d.value("test_size", c.data.test_size);
      c.data.terrain_types = d.value("terrain_types", c.data.terrain_types);
      c.data.noise = d.value("noise", c.data.noise);
      c.data.pool = d.value("pool", c.data.pool);
      c.data.feature_dim = d.value("feature_dim", c.data.feature_dim);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("bad data config: ") + e.what());
    }
  }
  if (c.data.train_size == 0) throw ConfigError("train_size must be positive");
  return c;
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j = c.train;
  j["data"] = {{"train_size", c.data.train_size}, {"test_size", c.data.test_size},
               {"terrain_types", c.data.terrain_types}, {"noise", c.data.noise},
               {"pool", c.data.pool}, {"feature_dim", c.data.feature_dim}};
  return j;
}

ExperimentConfig experiment_preset(Family family, int k) {
  ExperimentConfig c;
  c.train = learn::preset(family, k);
  // Near-tie tours need a precise embedding; 1000 examples overfit the pool.
  if (family == Family::kTsp) c.data.train_size = 10000;
  return c;
}

SyntheticDataset make_dataset(const ExperimentConfig& config, std::uint64_t seed) {
  const auto& inst = config.train.instance;
  const std::size_t n = config.data.train_size + config.data.test_size;
  switch (inst.family) {
    case Family::kShortestPath:
      return gen_sp({inst.k, inst.connectivity, n, config.data.terrain_types, config.data.noise, {}},
                    seed);
    case Family::kTsp:
      return gen_tsp({inst.k, n, config.data.pool, config.data.feature_dim}, seed);
    case Family::kMatching:
      return gen_pm({inst.k, n, config.data.noise}, seed);
  }
  throw ConfigError("unknown family");
}

learn::Split make_split(const SyntheticDataset& data) {
  learn::Split s;
  s.examples = data.examples;
  if (data.instance.family == Family::kTsp) return s;  // exact tour match
  auto instance = data.instance;
  instance.approximate = false;
  std::shared_ptr<const Solver> exact = solvers::make_solver(instance);
  s.accurate = [exact, &data](std::size_t i, const Indicator& pred) {
    return accuracy_optimal_cost(*exact, pred, data.true_weights[i], data.optimal_costs[i]).optimal;
  };
  return s;
}

std::string config_hash(const nlohmann::json& config) {
  nlohmann::json c = config;
  c.erase("seed");
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char ch : c.dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::json to_json(const RunRecord& r) {
  nlohmann::json history = nlohmann::json::array();
  for (const auto& m : r.history) history.push_back(learn::to_json(m));
  nlohmann::json j = {{"config_hash", r.config_hash},
                      {"seed", r.seed},
                      {"history", history},
                      {"final_train_acc", r.final_train_acc},
                      {"final_test_acc", r.final_test_acc},
                      {"wall_seconds", r.wall_seconds}};
  if (r.procrustes) {
    j["procrustes"] = {{"mean_offset_rad", r.procrustes->mean_offset},
                       {"mean_offset_km", r.procrustes->mean_offset_km},
                       {"degenerate", r.procrustes->degenerate}};
  }
  return j;
}

RunRecord run_experiment(const ExperimentConfig& config, std::uint64_t seed,
                         const learn::MetricsSink& sink) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentConfig c = config;
  c.train.seed = seed;

  const SyntheticDataset all = make_dataset(c, seed);
  const auto [train_data, test_data] = split(all, c.data.train_size);
  const learn::Split train_split = make_split(train_data);
  const learn::Split test_split = make_split(test_data);

  learn::TrainResult result = learn::train(c.train, train_split, test_split, sink);

  RunRecord r;
  r.config_hash = config_hash(to_json(c));
  r.seed = seed;
  r.history = result.history;
  r.final_train_acc = result.history.back().train_acc;
  r.final_test_acc = result.history.back().test_acc;
  r.model = result.model.to_json();
  if (c.train.instance.family == Family::kTsp) {
    r.procrustes = procrustes_offset(result.model.embed(all.pool_features), all.pool_locations);
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

nlohmann::json to_json(const SolverComparison& c) {
  return {{"exact_embedding_test_acc", c.exact.final_test_acc},
          {"approx_embedding_test_acc", c.approximate.final_test_acc},
          {"approx_on_truth_test_acc", c.approx_on_truth},
          {"exact_on_truth_test_acc", 1.0},
          {"exact", to_json(c.exact)},
          {"approximate", to_json(c.approximate)}};
}

SolverComparison compare_solvers(const ExperimentConfig& config, std::uint64_t seed,
                                 const learn::MetricsSink& sink) {
  if (config.train.instance.family != Family::kTsp) {
    throw ConfigError("solver comparison is defined for tsp only");
  }
  SolverComparison out;
  ExperimentConfig exact = config;
  exact.train.instance.approximate = false;
  out.exact = run_experiment(exact, seed, sink);

  ExperimentConfig approx = config;
  approx.train.instance.approximate = true;
  out.approximate = run_experiment(approx, seed, sink);

  const SyntheticDataset all = make_dataset(config, seed);
  const solvers::TspInstance instance{config.train.instance.k};
  std::size_t hits = 0;
  for (std::size_t i = config.data.train_size; i < all.size(); ++i) {
    hits += solvers::tsp_approx(instance, all.true_weights[i]).indicator == all.examples[i].label;
  }
  const std::size_t tests = all.size() - config.data.train_size;
  out.approx_on_truth = tests ? static_cast<double>(hits) / static_cast<double>(tests) : 0.0;
  return out;
}

}  // namespace combigrad::harness
