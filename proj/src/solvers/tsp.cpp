#include "combigrad/solvers/tsp.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <set>

#include "combigrad/error.hpp"

namespace combigrad::solvers {

std::size_t TspInstance::edge_index(int i, int j) const {
  if (i > j) std::swap(i, j);
  const auto a = static_cast<std::size_t>(i);
  const auto b = static_cast<std::size_t>(j);
  const auto n = static_cast<std::size_t>(k);
  return a * n - a * (a + 1) / 2 + (b - a - 1);
}

void TspInstance::validate() const {
  if (k < 3) throw InstanceError("TSP needs at least 3 cities, got " + std::to_string(k));
}

Indicator tour_to_indicator(const TspInstance& instance, std::span<const int> tour) {
  Indicator out(instance.edge_count(), 0);
  const std::size_t k = tour.size();
  for (std::size_t i = 0; i < k; ++i) {
    out[instance.edge_index(tour[i], tour[(i + 1) % k])] = 1;
  }
  return out;
}

namespace {

// Symmetric distance matrix view over the edge-slot layout.
class DistanceMatrix {
 public:
  DistanceMatrix(const TspInstance& instance, std::span<const double> dist)
      : k_(instance.k), d_(static_cast<std::size_t>(k_) * k_, 0.0) {
    for (int i = 0; i < k_; ++i) {
      for (int j = i + 1; j < k_; ++j) {
        const double v = dist[instance.edge_index(i, j)];
        d_[i * k_ + j] = v;
        d_[j * k_ + i] = v;
      }
    }
  }
  double operator()(int i, int j) const { return d_[static_cast<std::size_t>(i) * k_ + j]; }

 private:
  int k_;
  std::vector<double> d_;
};

void check_weights(const TspInstance& instance, std::span<const double> dist) {
  instance.validate();
  require_length(dist.size(), instance.edge_count(), "TSP distances");
  require_finite(dist, "TSP distances");
}

Solution make_solution(const TspInstance& instance, std::span<const double> dist,
                       std::span<const int> tour) {
  Solution out;
  out.indicator = tour_to_indicator(instance, tour);
  out.objective = dot(dist, out.indicator);
  return out;
}

}  // namespace

Solution tsp_exact(const TspInstance& instance, std::span<const double> dist) {
  check_weights(instance, dist);
  const int k = instance.k;
  if (k > kHeldKarpMaxCities) {
    throw CapacityError("Held-Karp is limited to " + std::to_string(kHeldKarpMaxCities) +
                        " cities (got " + std::to_string(k) + "); use the approximate solver");
  }
  const DistanceMatrix d(instance, dist);

  // State (S, j): S is a subset of cities 1..k-1 (bit c-1 for city c), j in S
  // is the last city; value is the cheapest path 0 -> ... -> j visiting S.
  const std::size_t m = static_cast<std::size_t>(k) - 1;
  const std::size_t subsets = std::size_t{1} << m;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> cost(subsets * m, inf);
  std::vector<std::int8_t> parent(subsets * m, -1);
  auto city = [](std::size_t bit) { return static_cast<int>(bit) + 1; };

  for (std::size_t j = 0; j < m; ++j) cost[(std::size_t{1} << j) * m + j] = d(0, city(j));

  for (std::size_t s = 1; s < subsets; ++s) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!(s >> j & 1U)) continue;
      const std::size_t prev = s & ~(std::size_t{1} << j);
      if (prev == 0) continue;
      double best = inf;
      int best_i = -1;
      for (std::size_t i = 0; i < m; ++i) {
        if (!(prev >> i & 1U)) continue;
        const double c = cost[prev * m + i] + d(city(i), city(j));
        if (c < best) {
          best = c;
          best_i = static_cast<int>(i);
        }
      }
      cost[s * m + j] = best;
      parent[s * m + j] = static_cast<std::int8_t>(best_i);
    }
  }

  const std::size_t full = subsets - 1;
  double best = inf;
  int last = -1;
  for (std::size_t j = 0; j < m; ++j) {
    const double c = cost[full * m + j] + d(city(j), 0);
    if (c < best) {
      best = c;
      last = static_cast<int>(j);
    }
  }

  std::vector<int> tour;
  tour.reserve(k);
  std::size_t s = full;
  for (int j = last; j != -1;) {
    tour.push_back(j + 1);
    const int p = parent[s * m + j];
    s &= ~(std::size_t{1} << j);
    j = p;
  }
  tour.push_back(0);
  std::reverse(tour.begin(), tour.end());
  return make_solution(instance, dist, tour);
}

Solution tsp_approx(const TspInstance& instance, std::span<const double> dist) {
  check_weights(instance, dist);
  const int k = instance.k;
  const DistanceMatrix d(instance, dist);

  std::vector<int> tour{0};
  std::vector<char> used(k, 0);
  used[0] = 1;
  while (static_cast<int>(tour.size()) < k) {
    const int from = tour.back();
    int next = -1;
    for (int c = 0; c < k; ++c) {
      if (used[c]) continue;
      if (next == -1 || d(from, c) < d(from, next)) next = c;
    }
    used[next] = 1;
    tour.push_back(next);
  }

  // Reversing tour[i+1..j] replaces edges (a,b), (c,e) by (a,c), (b,e).
  constexpr double kMinGain = 1e-12;
  for (;;) {
    double best_gain = kMinGain;
    int best_i = -1;
    int best_j = -1;
    for (int i = 0; i < k - 1; ++i) {
      for (int j = i + 2; j < k; ++j) {
        if (i == 0 && j == k - 1) continue;  // the two edges share city tour[0]
        const int a = tour[i];
        const int b = tour[i + 1];
        const int c = tour[j];
        const int e = tour[(j + 1) % k];
        const double gain = d(a, b) + d(c, e) - d(a, c) - d(b, e);
        if (gain > best_gain) {
          best_gain = gain;
          best_i = i;
          best_j = j;
        }
      }
    }
    if (best_i < 0) break;
    std::reverse(tour.begin() + best_i + 1, tour.begin() + best_j + 1);
  }
  return make_solution(instance, dist, tour);
}

bool is_hamiltonian_cycle(const TspInstance& instance, std::span<const std::uint8_t> indicator) {
  const int k = instance.k;
  if (k < 3 || indicator.size() != instance.edge_count()) return false;
  std::vector<std::vector<int>> adj(k);
  std::size_t edges = 0;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const auto b = indicator[instance.edge_index(i, j)];
      if (b > 1) return false;
      if (b) {
        adj[i].push_back(j);
        adj[j].push_back(i);
        ++edges;
      }
    }
  }
  if (edges != static_cast<std::size_t>(k)) return false;
  for (const auto& a : adj) {
    if (a.size() != 2) return false;
  }
  // Degree 2 everywhere: a single cycle iff walking from 0 visits all cities.
  int prev = -1;
  int cur = 0;
  for (int step = 0; step < k; ++step) {
    const int next = adj[cur][0] != prev ? adj[cur][0] : adj[cur][1];
    prev = cur;
    cur = next;
    if (cur == 0) return step == k - 1;
  }
  return false;
}

std::optional<std::vector<Indicator>> enumerate_tours(const TspInstance& instance,
                                                      std::size_t budget) {
  instance.validate();
  const int k = instance.k;
  double count = 1.0;
  for (int i = 3; i < k; ++i) count *= i;  // (k-1)!/2
  if (count > static_cast<double>(budget)) return std::nullopt;

  std::vector<int> rest(k - 1);
  std::iota(rest.begin(), rest.end(), 1);
  std::set<Indicator> tours;
  std::vector<int> tour(k);
  tour[0] = 0;
  do {
    if (rest.front() > rest.back()) continue;  // each direction counted once
    std::copy(rest.begin(), rest.end(), tour.begin() + 1);
    tours.insert(tour_to_indicator(instance, tour));
  } while (std::next_permutation(rest.begin(), rest.end()));
  return std::vector<Indicator>(tours.begin(), tours.end());
}

TspSolver::TspSolver(TspInstance instance, Mode mode) : instance_(instance), mode_(mode) {
  instance_.validate();
  if (mode_ == Mode::kExact && instance_.k > kHeldKarpMaxCities) {
    throw CapacityError("exact TSP solver is limited to " + std::to_string(kHeldKarpMaxCities) +
                        " cities; use the approximate solver");
  }
}

std::string TspSolver::name() const {
  return std::string(mode_ == Mode::kExact ? "tsp-exact" : "tsp-approx") +
         "(k=" + std::to_string(instance_.k) + ")";
}

Solution TspSolver::solve(std::span<const double> w) const {
  return mode_ == Mode::kExact ? tsp_exact(instance_, w) : tsp_approx(instance_, w);
}

bool TspSolver::feasible(std::span<const std::uint8_t> indicator) const {
  return is_hamiltonian_cycle(instance_, indicator);
}

std::optional<std::vector<Indicator>> TspSolver::enumerate(std::size_t budget) const {
  return enumerate_tours(instance_, budget);
}

}  // namespace combigrad::solvers
