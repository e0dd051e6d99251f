#include "combigrad/solvers/matching.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "combigrad/error.hpp"

namespace combigrad::solvers {

std::pair<int, int> MatchingInstance::endpoints(std::size_t e) const {
  const std::size_t h = horizontal_count();
  if (e < h) {
    const int r = static_cast<int>(e) / (k - 1);
    const int c = static_cast<int>(e) % (k - 1);
    return {r * k + c, r * k + c + 1};
  }
  const int idx = static_cast<int>(e - h);
  const int r = idx / k;
  const int c = idx % k;
  return {r * k + c, (r + 1) * k + c};
}

void MatchingInstance::validate() const {
  if (k < 2) throw InstanceError("matching grid side must be at least 2, got " + std::to_string(k));
  if (k % 2 != 0) {
    throw InstanceError("a " + std::to_string(k) + "x" + std::to_string(k) +
                        " grid has an odd vertex count and no perfect matching");
  }
}

Solution matching_exact(const MatchingInstance& instance, std::span<const double> edge_costs) {
  instance.validate();
  if (instance.k > kMatchingMaxSide) {
    throw CapacityError("matching solver is limited to k <= " + std::to_string(kMatchingMaxSide));
  }
  const std::size_t n_edges = instance.edge_count();
  require_length(edge_costs.size(), n_edges, "matching edge costs");
  require_finite(edge_costs, "matching edge costs");

  // Split vertices by color; even vertices are rows, odd vertices columns.
  const int k = instance.k;
  const int nv = k * k;
  std::vector<int> slot(nv);
  std::vector<int> even_vertex;
  std::vector<int> odd_vertex;
  for (int v = 0; v < nv; ++v) {
    if ((v / k + v % k) % 2 == 0) {
      slot[v] = static_cast<int>(even_vertex.size());
      even_vertex.push_back(v);
    } else {
      slot[v] = static_cast<int>(odd_vertex.size());
      odd_vertex.push_back(v);
    }
  }
  const int n = static_cast<int>(even_vertex.size());

  // Missing edges get a cost no perfect matching on real edges can reach.
  double magnitude = 0.0;
  for (double c : edge_costs) magnitude += std::abs(c);
  const double missing = 2.0 * magnitude + 1.0;

  // 1-based cost matrix, with the edge index for each real entry.
  std::vector<double> a((n + 1) * (n + 1), missing);
  std::vector<int> edge_at((n + 1) * (n + 1), -1);
  for (std::size_t e = 0; e < n_edges; ++e) {
    auto [u, v] = instance.endpoints(e);
    if ((u / k + u % k) % 2 != 0) std::swap(u, v);
    const int i = slot[u] + 1;
    const int j = slot[v] + 1;
    a[i * (n + 1) + j] = edge_costs[e];
    edge_at[i * (n + 1) + j] = static_cast<int>(e);
  }

  // Hungarian method with row/column potentials, O(n^3).
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = a[i0 * (n + 1) + j] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Solution out;
  out.indicator.assign(n_edges, 0);
  for (int j = 1; j <= n; ++j) {
    const int e = edge_at[p[j] * (n + 1) + j];
    if (e < 0) throw InstanceError("matching solver selected a missing edge");
    out.indicator[e] = 1;
  }
  out.objective = dot(edge_costs, out.indicator);
  return out;
}

bool is_perfect_matching(const MatchingInstance& instance,
                         std::span<const std::uint8_t> indicator) {
  if (instance.k < 2 || indicator.size() != instance.edge_count()) return false;
  std::vector<int> degree(instance.vertex_count(), 0);
  for (std::size_t e = 0; e < indicator.size(); ++e) {
    if (indicator[e] > 1) return false;
    if (!indicator[e]) continue;
    const auto [u, v] = instance.endpoints(e);
    ++degree[u];
    ++degree[v];
  }
  return std::all_of(degree.begin(), degree.end(), [](int d) { return d == 1; });
}

std::optional<std::vector<Indicator>> enumerate_matchings(const MatchingInstance& instance,
                                                          std::size_t budget) {
  instance.validate();
  const int k = instance.k;
  const int nv = k * k;
  const std::size_t h = instance.horizontal_count();
  std::vector<char> covered(nv, 0);
  Indicator current(instance.edge_count(), 0);
  std::vector<Indicator> out;
  bool exceeded = false;

  // The lowest uncovered vertex can only pair with its right or lower neighbor.
  std::function<void(int)> rec = [&](int start) {
    if (exceeded) return;
    int v = start;
    while (v < nv && covered[v]) ++v;
    if (v == nv) {
      if (out.size() >= budget) {
        exceeded = true;
        return;
      }
      out.push_back(current);
      return;
    }
    const int r = v / k;
    const int c = v % k;
    if (c + 1 < k && !covered[v + 1]) {
      const std::size_t e = static_cast<std::size_t>(r) * (k - 1) + c;
      covered[v] = covered[v + 1] = 1;
      current[e] = 1;
      rec(v + 1);
      current[e] = 0;
      covered[v] = covered[v + 1] = 0;
    }
    if (r + 1 < k) {
      const std::size_t e = h + static_cast<std::size_t>(r) * k + c;
      covered[v] = covered[v + k] = 1;
      current[e] = 1;
      rec(v + 1);
      current[e] = 0;
      covered[v] = covered[v + k] = 0;
    }
  };
  rec(0);
  if (exceeded) return std::nullopt;
  std::sort(out.begin(), out.end());
  return out;
}

MatchingSolver::MatchingSolver(MatchingInstance instance) : instance_(instance) {
  instance_.validate();
  if (instance_.k > kMatchingMaxSide) {
    throw CapacityError("matching solver is limited to k <= " + std::to_string(kMatchingMaxSide));
  }
}

std::string MatchingSolver::name() const { return "pm(k=" + std::to_string(instance_.k) + ")"; }

Solution MatchingSolver::solve(std::span<const double> w) const {
  return matching_exact(instance_, w);
}

bool MatchingSolver::feasible(std::span<const std::uint8_t> indicator) const {
  return is_perfect_matching(instance_, indicator);
}

std::optional<std::vector<Indicator>> MatchingSolver::enumerate(std::size_t budget) const {
  return enumerate_matchings(instance_, budget);
}

}  // namespace combigrad::solvers
