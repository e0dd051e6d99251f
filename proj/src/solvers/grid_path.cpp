#include "combigrad/solvers/grid_path.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <set>
#include <utility>

#include "combigrad/error.hpp"

namespace combigrad::solvers {

std::vector<int> GridGraph::neighbors(int v) const {
  std::vector<int> out;
  out.reserve(8);
  const int r = v / k;
  const int c = v % k;
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      if (dr == 0 && dc == 0) continue;
      if (connectivity == 4 && dr != 0 && dc != 0) continue;
      const int rr = r + dr;
      const int cc = c + dc;
      if (rr < 0 || rr >= k || cc < 0 || cc >= k) continue;
      out.push_back(rr * k + cc);
    }
  }
  return out;
}

void GridGraph::validate() const {
  if (k < 2) throw InstanceError("grid side must be at least 2, got " + std::to_string(k));
  if (connectivity != 4 && connectivity != 8) {
    throw InstanceError("grid connectivity must be 4 or 8, got " + std::to_string(connectivity));
  }
}

Solution dijkstra_grid(const GridGraph& grid, std::span<const double> vertex_costs) {
  grid.validate();
  const std::size_t n = grid.vertex_count();
  require_length(vertex_costs.size(), n, "grid vertex costs");
  require_finite(vertex_costs, "grid vertex costs");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(vertex_costs[i] > 0.0)) {
      throw InputError("grid vertex costs must be positive; entry " + std::to_string(i) + " is " +
                       std::to_string(vertex_costs[i]));
    }
  }

  const int source = 0;
  const int target = static_cast<int>(n) - 1;
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<int> pred(n, -1);
  std::vector<char> settled(n, 0);

  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  dist[source] = vertex_costs[source];
  open.emplace(dist[source], source);

  while (!open.empty()) {
    const auto [d, v] = open.top();
    open.pop();
    if (settled[v]) continue;
    settled[v] = 1;
    if (v == target) break;
    for (int u : grid.neighbors(v)) {
      if (settled[u]) continue;
      const double nd = d + vertex_costs[u];
      if (nd < dist[u]) {
        dist[u] = nd;
        pred[u] = v;
        open.emplace(nd, u);
      }
    }
  }

  Solution out;
  out.indicator.assign(n, 0);
  for (int v = target; v != -1; v = pred[v]) out.indicator[v] = 1;
  out.objective = dot(vertex_costs, out.indicator);
  return out;
}

namespace {

// Depth-first search for a Hamiltonian path of the marked subgraph from
// `current` to the target. `remaining` counts unvisited marked vertices.
bool hamiltonian_from(const GridGraph& grid, std::span<const std::uint8_t> marked,
                      std::vector<char>& visited, int current, int target, std::size_t remaining) {
  if (current == target) return remaining == 0;
  for (int u : grid.neighbors(current)) {
    if (!marked[u] || visited[u]) continue;
    if (u == target && remaining != 1) continue;
    visited[u] = 1;
    if (hamiltonian_from(grid, marked, visited, u, target, remaining - 1)) return true;
    visited[u] = 0;
  }
  return false;
}

}  // namespace

bool is_grid_path(const GridGraph& grid, std::span<const std::uint8_t> indicator) {
  const std::size_t n = grid.vertex_count();
  if (indicator.size() != n) return false;
  std::size_t marked = 0;
  for (auto b : indicator) {
    if (b > 1) return false;
    marked += b;
  }
  const int target = static_cast<int>(n) - 1;
  if (!indicator[0] || !indicator[target]) return false;

  // Cheap rejection before the exponential search: marked set must be connected.
  {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int u : grid.neighbors(v)) {
        if (indicator[u] && !seen[u]) {
          seen[u] = 1;
          ++reached;
          stack.push_back(u);
        }
      }
    }
    if (reached != marked) return false;
  }

  std::vector<char> visited(n, 0);
  visited[0] = 1;
  return hamiltonian_from(grid, indicator, visited, 0, target, marked - 1);
}

std::optional<std::vector<Indicator>> enumerate_grid_paths(const GridGraph& grid,
                                                           std::size_t budget) {
  grid.validate();
  const std::size_t n = grid.vertex_count();
  const int target = static_cast<int>(n) - 1;
  std::set<Indicator> sets;
  Indicator on_path(n, 0);
  std::size_t explored = 0;
  bool exceeded = false;

  std::function<void(int)> dfs = [&](int v) {
    if (exceeded) return;
    if (v == target) {
      if (++explored > budget) {
        exceeded = true;
        return;
      }
      sets.insert(on_path);
      return;
    }
    for (int u : grid.neighbors(v)) {
      if (on_path[u]) continue;
      on_path[u] = 1;
      dfs(u);
      on_path[u] = 0;
      if (exceeded) return;
    }
  };
  on_path[0] = 1;
  dfs(0);
  if (exceeded) return std::nullopt;
  return std::vector<Indicator>(sets.begin(), sets.end());
}

GridPathSolver::GridPathSolver(GridGraph grid) : grid_(grid) { grid_.validate(); }

std::string GridPathSolver::name() const {
  return "sp(k=" + std::to_string(grid_.k) + ",conn=" + std::to_string(grid_.connectivity) + ")";
}

Solution GridPathSolver::solve(std::span<const double> w) const { return dijkstra_grid(grid_, w); }

bool GridPathSolver::feasible(std::span<const std::uint8_t> indicator) const {
  return is_grid_path(grid_, indicator);
}

std::optional<std::vector<Indicator>> GridPathSolver::enumerate(std::size_t budget) const {
  return enumerate_grid_paths(grid_, budget);
}

}  // namespace combigrad::solvers
