#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "combigrad/solver.hpp"

namespace combigrad::solvers {

inline constexpr std::size_t kEnumerationBudget = 10'000'000;

// Exact argmin of w . phi(y) over an explicit candidate list. Among candidates
// with identical objective, the one selecting the earliest index at the first
// position where they differ wins (the lexicographically largest indicator,
// so (1,0) beats (0,1)).
//
// Throws CapacityError if the list exceeds `budget`, InstanceError if it is
// empty or a candidate has the wrong length.
Solution brute_force_oracle(std::span<const Indicator> candidates, std::span<const double> w,
                            std::size_t budget = kEnumerationBudget);

// Solver over an explicit solution set; usable for any instance small enough
// to enumerate and for hand-built toy problems.
class EnumeratedSolver final : public Solver {
 public:
  explicit EnumeratedSolver(std::vector<Indicator> solutions, std::string label = "enumerated");

  // Enumerates `inner` within the budget; throws CapacityError if it cannot.
  static EnumeratedSolver from(const Solver& inner, std::size_t budget = kEnumerationBudget);

  std::string name() const override { return label_; }
  std::size_t dimension() const override { return dimension_; }
  Solution solve(std::span<const double> w) const override;
  bool feasible(std::span<const std::uint8_t> indicator) const override;
  std::optional<std::vector<Indicator>> enumerate(std::size_t budget) const override;

  const std::vector<Indicator>& solutions() const { return solutions_; }

 private:
  std::vector<Indicator> solutions_;  // sorted, unique
  std::size_t dimension_ = 0;
  std::string label_;
};

}  // namespace combigrad::solvers
