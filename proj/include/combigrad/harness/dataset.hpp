#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <vector>

#include <json.hpp>

#include "combigrad/learn/train.hpp"
#include "combigrad/solvers/registry.hpp"

namespace combigrad::harness {

// Examples together with the hidden ground truth that produced their labels.
struct SyntheticDataset {
  solvers::InstanceSpec instance;
  std::vector<learn::Example> examples;
  std::vector<std::vector<double>> true_weights;  // solver weights under the hidden truth
  std::vector<double> optimal_costs;
  // Per example, per item: terrain type (sp), city id (tsp) or digit (pm).
  std::vector<std::vector<int>> items;

  std::vector<double> type_costs;      // sp: hidden cost of each terrain type
  learn::Tensor pool_locations;        // tsp: [pool, 3] unit vectors
  learn::Tensor pool_features;         // tsp: [pool, feature_dim]

  std::size_t size() const { return examples.size(); }
};

// Independent generator for stream `stream` of a run with this seed.
std::mt19937_64 derived_rng(std::uint64_t seed, std::uint64_t stream);

struct SpOptions {
  int k = 6;
  int connectivity = 8;
  std::size_t size = 1200;
  int terrain_types = 5;
  double noise = 0.05;
  // Hidden per-type costs; drawn from U[0.8, 9.2] when empty.
  std::vector<double> type_costs;
};

struct TspOptions {
  int k = 5;
  std::size_t size = 1200;
  std::size_t pool = 100;
  std::size_t feature_dim = 128;
};

struct PmOptions {
  int k = 4;
  std::size_t size = 1200;
  double noise = 0.05;
};

// k x k terrain grids. Features are one-hot terrain types plus Gaussian noise;
// labels are shortest paths under the hidden type costs.
SyntheticDataset gen_sp(const SpOptions& options, std::uint64_t seed);

// k cities drawn from a fixed pool of random unit-sphere locations, each with a
// fixed random feature vector. Labels are exact optimal tours on chord lengths.
// Throws ConfigError if pool < k, CapacityError above the exact-solver guard.
SyntheticDataset gen_tsp(const TspOptions& options, std::uint64_t seed);

// k x k digit grids with one-hot digit features plus noise; edge costs read two
// digits (10 * first + second). Labels are min-cost perfect matchings.
// Throws InstanceError for odd k.
SyntheticDataset gen_pm(const PmOptions& options, std::uint64_t seed);

// Splits off the first `train` examples; the rest become the test part.
std::pair<SyntheticDataset, SyntheticDataset> split(const SyntheticDataset& data,
                                                    std::size_t train);

struct AuditReport {
  std::size_t checked = 0;
  std::size_t failures = 0;        // label infeasible or not cost-optimal
  std::size_t brute_forced = 0;    // also compared against full enumeration
  std::vector<std::size_t> failing;

  bool pass() const { return failures == 0; }
};

// Checks every label against the exact solver on the hidden weights and,
// when the instance can be enumerated, against brute force.
AuditReport audit_labels(const SyntheticDataset& data);

// Dataset as JSON lines: a header object {"instance", "type_costs", "pool_locations",
// "pool_features"} followed by one object per example {"features", "label",
// "truth": {"items", "weights", "optimal_cost"}}.
void write_jsonl(const SyntheticDataset& data, std::ostream& out);
SyntheticDataset read_jsonl(std::istream& in);

}  // namespace combigrad::harness
