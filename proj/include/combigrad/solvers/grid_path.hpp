#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "combigrad/solver.hpp"

namespace combigrad::solvers {

// k x k grid of vertices, indexed row-major. Paths run from the top-left
// vertex (index 0) to the bottom-right vertex (index k*k - 1).
struct GridGraph {
  int k = 2;
  int connectivity = 8;  // 4 (orthogonal moves) or 8 (diagonals allowed)

  std::size_t vertex_count() const { return static_cast<std::size_t>(k) * k; }
  // Neighbors of v in a fixed order (row-major over the 3x3 stencil).
  std::vector<int> neighbors(int v) const;
  void validate() const;
};

// Minimum vertex-cost path from top-left to bottom-right. The cost of a path
// is the sum of the costs of every vertex on it, both endpoints included, so
// the returned objective equals costs . indicator.
//
// Reduction: Dijkstra on directed moves charged with the head vertex cost, the
// source cost added once. Ties: vertices are settled in (distance, index)
// order and a predecessor is replaced only on strict improvement, so among
// co-optimal paths the one found first in that order wins.
//
// Throws InputError if any cost is not strictly positive.
Solution dijkstra_grid(const GridGraph& grid, std::span<const double> vertex_costs);

// True iff the marked vertices are exactly the vertex set of some simple
// source -> target path.
bool is_grid_path(const GridGraph& grid, std::span<const std::uint8_t> indicator);

// Distinct vertex sets of all simple source -> target paths, sorted
// lexicographically. nullopt if more than `budget` paths would be explored.
std::optional<std::vector<Indicator>> enumerate_grid_paths(const GridGraph& grid,
                                                           std::size_t budget);

class GridPathSolver final : public Solver {
 public:
  explicit GridPathSolver(GridGraph grid);

  std::string name() const override;
  std::size_t dimension() const override { return grid_.vertex_count(); }
  Solution solve(std::span<const double> w) const override;
  bool feasible(std::span<const std::uint8_t> indicator) const override;
  std::optional<std::vector<Indicator>> enumerate(std::size_t budget) const override;

  const GridGraph& grid() const { return grid_; }

 private:
  GridGraph grid_;
};

}  // namespace combigrad::solvers
