#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "combigrad/solver.hpp"

namespace combigrad::solvers {

// Perfect matchings of the k x k grid graph without diagonals.
//
// Edge layout (N = 2k(k-1)): first the horizontal edges row by row, left to
// right, (r,c)-(r,c+1); then the vertical edges row by row, (r,c)-(r+1,c).
// For k = 2 that is (top, bottom, left, right).
struct MatchingInstance {
  int k = 2;

  std::size_t vertex_count() const { return static_cast<std::size_t>(k) * k; }
  std::size_t edge_count() const { return 2 * static_cast<std::size_t>(k) * (k - 1); }
  std::size_t horizontal_count() const { return static_cast<std::size_t>(k) * (k - 1); }
  // Endpoints (as row-major vertex indices) of edge e; the first endpoint is
  // the left vertex for horizontal edges and the upper vertex for vertical ones.
  std::pair<int, int> endpoints(std::size_t e) const;
  void validate() const;
};

inline constexpr int kMatchingMaxSide = 8;

// Minimum-cost perfect matching. The grid is bipartite (color = (r + c) mod 2),
// so this runs the Hungarian method with potentials on the color classes.
// Ties: rows are inserted in increasing vertex index and columns scanned in
// increasing index with strict-improvement updates.
//
// Throws InstanceError for odd k and CapacityError for k > kMatchingMaxSide.
Solution matching_exact(const MatchingInstance& instance, std::span<const double> edge_costs);

bool is_perfect_matching(const MatchingInstance& instance,
                         std::span<const std::uint8_t> indicator);

// All perfect matchings, sorted lexicographically by indicator.
std::optional<std::vector<Indicator>> enumerate_matchings(const MatchingInstance& instance,
                                                          std::size_t budget);

class MatchingSolver final : public Solver {
 public:
  explicit MatchingSolver(MatchingInstance instance);

  std::string name() const override;
  std::size_t dimension() const override { return instance_.edge_count(); }
  Solution solve(std::span<const double> w) const override;
  bool feasible(std::span<const std::uint8_t> indicator) const override;
  std::optional<std::vector<Indicator>> enumerate(std::size_t budget) const override;

  const MatchingInstance& instance() const { return instance_; }

 private:
  MatchingInstance instance_;
};

}  // namespace combigrad::solvers
