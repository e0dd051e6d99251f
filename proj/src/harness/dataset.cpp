#include "combigrad/harness/dataset.hpp"

#include <cmath>
#include <string>

#include "combigrad/error.hpp"
#include "combigrad/parallel.hpp"
#include "combigrad/solvers/brute_force.hpp"
#include "combigrad/solvers/grid_path.hpp"
#include "combigrad/solvers/matching.hpp"
#include "combigrad/solvers/tsp.hpp"

namespace combigrad::harness {

using learn::Tensor;
using solvers::Family;

namespace {

constexpr double kCostTolerance = 1e-9;

solvers::InstanceSpec exact_spec(solvers::InstanceSpec spec) {
  spec.approximate = false;
  return spec;
}

// Labels every example with the exact solver, in parallel.
void label(SyntheticDataset& data) {
  const auto solver = solvers::make_solver(exact_spec(data.instance));
  parallel_for(data.size(), 0, [&](std::size_t i) {
    const Solution s = solver->solve(data.true_weights[i]);
    data.examples[i].label = s.indicator;
    data.optimal_costs[i] = s.objective;
  });
}

void resize(SyntheticDataset& data, std::size_t n) {
  data.examples.resize(n);
  data.true_weights.resize(n);
  data.optimal_costs.resize(n);
  data.items.resize(n);
}

Tensor one_hot_features(const std::vector<int>& items, std::size_t classes, double noise,
                        std::mt19937_64& rng) {
  Tensor f = Tensor::zeros({items.size(), classes});
  std::normal_distribution<double> jitter(0.0, noise);
  for (std::size_t r = 0; r < items.size(); ++r) {
    for (std::size_t c = 0; c < classes; ++c) {
      f.at(r, c) = (static_cast<int>(c) == items[r] ? 1.0 : 0.0) + (noise > 0 ? jitter(rng) : 0.0);
    }
  }
  return f;
}

}  // namespace

std::mt19937_64 derived_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

SyntheticDataset gen_sp(const SpOptions& o, std::uint64_t seed) {
  if (o.terrain_types < 2) throw ConfigError("need at least two terrain types");
  if (!o.type_costs.empty() && o.type_costs.size() != static_cast<std::size_t>(o.terrain_types)) {
    throw ConfigError("type_costs must list one cost per terrain type");
  }
  SyntheticDataset data;
  data.instance = {Family::kShortestPath, o.k, o.connectivity, false};
  solvers::GridGraph{o.k, o.connectivity}.validate();

  data.type_costs = o.type_costs;
  if (data.type_costs.empty()) {
    auto rng = derived_rng(seed, 0);
    std::uniform_real_distribution<double> cost(0.8, 9.2);
    for (int t = 0; t < o.terrain_types; ++t) data.type_costs.push_back(cost(rng));
  }
  for (double c : data.type_costs) {
    if (!(c > 0.0)) throw ConfigError("terrain costs must be positive");
  }

  resize(data, o.size);
  const std::size_t n = static_cast<std::size_t>(o.k) * o.k;
  parallel_for(o.size, 0, [&](std::size_t i) {
    auto rng = derived_rng(seed, i + 1);
    std::uniform_int_distribution<int> type(0, o.terrain_types - 1);
    std::vector<int> items(n);
    std::vector<double> w(n);
    for (std::size_t v = 0; v < n; ++v) {
      items[v] = type(rng);
      w[v] = data.type_costs[items[v]];
    }
    data.examples[i].features = one_hot_features(items, o.terrain_types, o.noise, rng);
    data.items[i] = std::move(items);
    data.true_weights[i] = std::move(w);
  });
  label(data);
  return data;
}

SyntheticDataset gen_tsp(const TspOptions& o, std::uint64_t seed) {
  const solvers::TspInstance instance{o.k};
  instance.validate();
  if (o.pool < static_cast<std::size_t>(o.k)) throw ConfigError("city pool smaller than k");
  if (o.k > solvers::kHeldKarpMaxCities) {
    throw CapacityError("k exceeds the exact TSP guard of " +
                        std::to_string(solvers::kHeldKarpMaxCities) + " cities");
  }
  if (o.feature_dim == 0) throw ConfigError("feature_dim must be positive");

  SyntheticDataset data;
  data.instance = {Family::kTsp, o.k, 8, false};
  {
    auto rng = derived_rng(seed, 0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    data.pool_locations = Tensor::zeros({o.pool, 3});
    for (std::size_t c = 0; c < o.pool; ++c) {
      double norm = 0.0;
      do {
        for (std::size_t d = 0; d < 3; ++d) data.pool_locations.at(c, d) = gauss(rng);
        norm = std::hypot(data.pool_locations.at(c, 0), data.pool_locations.at(c, 1),
                          data.pool_locations.at(c, 2));
      } while (norm < 1e-6);
      for (std::size_t d = 0; d < 3; ++d) data.pool_locations.at(c, d) /= norm;
    }
    data.pool_features = Tensor::zeros({o.pool, o.feature_dim});
    for (double& x : data.pool_features.data) x = gauss(rng);
  }

  resize(data, o.size);
  parallel_for(o.size, 0, [&](std::size_t i) {
    auto rng = derived_rng(seed, i + 1);
    // Partial Fisher-Yates for k distinct cities.
    std::vector<int> ids(o.pool);
    for (std::size_t c = 0; c < o.pool; ++c) ids[c] = static_cast<int>(c);
    for (int j = 0; j < o.k; ++j) {
      std::uniform_int_distribution<std::size_t> pick(j, o.pool - 1);
      std::swap(ids[j], ids[pick(rng)]);
    }
    ids.resize(o.k);

    Tensor f = Tensor::zeros({static_cast<std::size_t>(o.k), o.feature_dim});
    std::vector<double> w(instance.edge_count());
    for (int a = 0; a < o.k; ++a) {
      for (std::size_t d = 0; d < o.feature_dim; ++d) f.at(a, d) = data.pool_features.at(ids[a], d);
      for (int b = a + 1; b < o.k; ++b) {
        double s = 0.0;
        for (std::size_t d = 0; d < 3; ++d) {
          const double diff = data.pool_locations.at(ids[a], d) - data.pool_locations.at(ids[b], d);
          s += diff * diff;
        }
        w[instance.edge_index(a, b)] = std::sqrt(s);
      }
    }
    data.examples[i].features = std::move(f);
    data.items[i] = std::move(ids);
    data.true_weights[i] = std::move(w);
  });
  label(data);
  return data;
}

SyntheticDataset gen_pm(const PmOptions& o, std::uint64_t seed) {
  const solvers::MatchingInstance instance{o.k};
  instance.validate();
  SyntheticDataset data;
  data.instance = {Family::kMatching, o.k, 8, false};
  resize(data, o.size);
  parallel_for(o.size, 0, [&](std::size_t i) {
    auto rng = derived_rng(seed, i + 1);
    std::uniform_int_distribution<int> digit(0, 9);
    std::vector<int> digits(instance.vertex_count());
    for (int& d : digits) d = digit(rng);
    std::vector<double> w(instance.edge_count());
    for (std::size_t e = 0; e < w.size(); ++e) {
      const auto [first, second] = instance.endpoints(e);
      w[e] = 10.0 * digits[first] + digits[second];
    }
    data.examples[i].features = one_hot_features(digits, 10, o.noise, rng);
    data.items[i] = std::move(digits);
    data.true_weights[i] = std::move(w);
  });
  label(data);
  return data;
}

std::pair<SyntheticDataset, SyntheticDataset> split(const SyntheticDataset& data,
                                                    std::size_t train) {
  if (train > data.size()) throw ConfigError("split larger than the dataset");
  auto part = [&](std::size_t begin, std::size_t end) {
    SyntheticDataset d;
    d.instance = data.instance;
    d.type_costs = data.type_costs;
    d.pool_locations = data.pool_locations;
    d.pool_features = data.pool_features;
    d.examples.assign(data.examples.begin() + begin, data.examples.begin() + end);
    d.true_weights.assign(data.true_weights.begin() + begin, data.true_weights.begin() + end);
    d.optimal_costs.assign(data.optimal_costs.begin() + begin, data.optimal_costs.begin() + end);
    d.items.assign(data.items.begin() + begin, data.items.begin() + end);
    return d;
  };
  return {part(0, train), part(train, data.size())};
}

AuditReport audit_labels(const SyntheticDataset& data) {
  AuditReport r;
  const auto solver = solvers::make_solver(exact_spec(data.instance));
  const auto all = solver->enumerate(solvers::kEnumerationBudget);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Indicator& y = data.examples[i].label;
    const std::vector<double>& w = data.true_weights[i];
    bool ok = y.size() == solver->dimension() && w.size() == solver->dimension() &&
              solver->feasible(y);
    if (ok) {
      const double cost = dot(w, y);
      ok = std::abs(cost - solver->solve(w).objective) <= kCostTolerance &&
           std::abs(cost - data.optimal_costs[i]) <= kCostTolerance;
      if (ok && all) {
        ok = std::abs(cost - solvers::brute_force_oracle(*all, w).objective) <= kCostTolerance;
        ++r.brute_forced;
      }
    }
    ++r.checked;
    if (!ok) {
      ++r.failures;
      r.failing.push_back(i);
    }
  }
  return r;
}

void write_jsonl(const SyntheticDataset& data, std::ostream& out) {
  nlohmann::json header = {{"instance", data.instance}, {"size", data.size()}};
  if (!data.type_costs.empty()) header["type_costs"] = data.type_costs;
  if (data.pool_locations.size() > 0) {
    header["pool_locations"] = {{"shape", data.pool_locations.shape},
                                {"data", data.pool_locations.data}};
    header["pool_features"] = {{"shape", data.pool_features.shape},
                               {"data", data.pool_features.data}};
  }
  out << header.dump() << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Tensor& f = data.examples[i].features;
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < f.rows(); ++r) {
      rows.push_back(std::vector<double>(f.data.begin() + r * f.cols(),
                                         f.data.begin() + (r + 1) * f.cols()));
    }
    nlohmann::json line = {{"features", rows},
                           {"label", data.examples[i].label},
                           {"truth",
                            {{"items", data.items[i]},
                             {"weights", data.true_weights[i]},
                             {"optimal_cost", data.optimal_costs[i]}}}};
    out << line.dump() << '\n';
  }
}

SyntheticDataset read_jsonl(std::istream& in) {
  SyntheticDataset data;
  std::string line;
  try {
    if (!std::getline(in, line)) throw InputError("empty dataset file");
    const auto header = nlohmann::json::parse(line);
    data.instance = header.at("instance").get<solvers::InstanceSpec>();
    if (header.contains("type_costs")) data.type_costs = header["type_costs"].get<std::vector<double>>();
    if (header.contains("pool_locations")) {
      const auto& p = header["pool_locations"];
      data.pool_locations = Tensor(p.at("shape").get<std::vector<std::size_t>>(),
                                   p.at("data").get<std::vector<double>>());
      const auto& f = header.at("pool_features");
      data.pool_features = Tensor(f.at("shape").get<std::vector<std::size_t>>(),
                                  f.at("data").get<std::vector<double>>());
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line);
      const auto rows = j.at("features").get<std::vector<std::vector<double>>>();
      if (rows.empty()) throw InputError("line " + std::to_string(lineno) + ": no features");
      std::vector<double> flat;
      for (const auto& r : rows) {
        if (r.size() != rows.front().size()) {
          throw InputError("line " + std::to_string(lineno) + ": ragged feature rows");
        }
        flat.insert(flat.end(), r.begin(), r.end());
      }
      learn::Example ex{Tensor({rows.size(), rows.front().size()}, std::move(flat)),
                        j.at("label").get<Indicator>()};
      data.examples.push_back(std::move(ex));
      const auto& truth = j.at("truth");
      data.items.push_back(truth.at("items").get<std::vector<int>>());
      data.true_weights.push_back(truth.at("weights").get<std::vector<double>>());
      data.optimal_costs.push_back(truth.at("optimal_cost").get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed dataset: ") + e.what());
  }
  return data;
}

}  // namespace combigrad::harness
