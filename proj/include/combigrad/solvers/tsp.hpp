#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "combigrad/solver.hpp"

namespace combigrad::solvers {

// Symmetric TSP on k cities. Weights and indicators live on the k(k-1)/2
// edge slots of the row-major upper triangle: (0,1), (0,2), ..., (0,k-1),
// (1,2), ...
struct TspInstance {
  int k = 3;

  std::size_t edge_count() const { return static_cast<std::size_t>(k) * (k - 1) / 2; }
  std::size_t edge_index(int i, int j) const;
  void validate() const;
};

inline constexpr int kHeldKarpMaxCities = 20;

// City sequence starting at city 0 -> indicator over edge slots.
Indicator tour_to_indicator(const TspInstance& instance, std::span<const int> tour);

// Exact tour by Held-Karp dynamic programming. Ties: predecessors are scanned
// in increasing city index and replaced only on strict improvement.
//
// Throws CapacityError for k > kHeldKarpMaxCities; use tsp_approx instead.
Solution tsp_exact(const TspInstance& instance, std::span<const double> dist);

// Nearest-neighbor tour from city 0 (ties to the lower index) improved by
// best-improvement 2-opt until no swap shortens the tour. Deterministic and
// always feasible, not certified optimal.
Solution tsp_approx(const TspInstance& instance, std::span<const double> dist);

bool is_hamiltonian_cycle(const TspInstance& instance, std::span<const std::uint8_t> indicator);

// All (k-1)!/2 distinct tours, sorted lexicographically by indicator.
std::optional<std::vector<Indicator>> enumerate_tours(const TspInstance& instance,
                                                      std::size_t budget);

class TspSolver final : public Solver {
 public:
  enum class Mode { kExact, kApprox };

  explicit TspSolver(TspInstance instance, Mode mode = Mode::kExact);

  std::string name() const override;
  std::size_t dimension() const override { return instance_.edge_count(); }
  Solution solve(std::span<const double> w) const override;
  bool feasible(std::span<const std::uint8_t> indicator) const override;
  bool exact() const override { return mode_ == Mode::kExact; }
  std::optional<std::vector<Indicator>> enumerate(std::size_t budget) const override;

  const TspInstance& instance() const { return instance_; }

 private:
  TspInstance instance_;
  Mode mode_;
};

}  // namespace combigrad::solvers
