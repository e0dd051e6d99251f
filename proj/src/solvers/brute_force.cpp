#include "combigrad/solvers/brute_force.hpp"

#include <algorithm>

#include "combigrad/error.hpp"

namespace combigrad::solvers {

Solution brute_force_oracle(std::span<const Indicator> candidates, std::span<const double> w,
                            std::size_t budget) {
  if (candidates.empty()) throw InstanceError("brute-force oracle needs at least one candidate");
  if (candidates.size() > budget) {
    throw CapacityError("candidate set of size " + std::to_string(candidates.size()) +
                        " exceeds the enumeration budget " + std::to_string(budget));
  }
  require_finite(w, "oracle weights");
  const Indicator* best = nullptr;
  double best_cost = 0.0;
  for (const Indicator& y : candidates) {
    require_length(y.size(), w.size(), "oracle candidate");
    const double c = dot(w, y);
    if (best == nullptr || c < best_cost || (c == best_cost && y > *best)) {
      best = &y;
      best_cost = c;
    }
  }
  return Solution{*best, best_cost};
}

EnumeratedSolver::EnumeratedSolver(std::vector<Indicator> solutions, std::string label)
    : solutions_(std::move(solutions)), label_(std::move(label)) {
  if (solutions_.empty()) throw InstanceError("enumerated solver needs a nonempty solution set");
  dimension_ = solutions_.front().size();
  for (const auto& y : solutions_) require_length(y.size(), dimension_, "enumerated solution");
  std::sort(solutions_.begin(), solutions_.end());
  solutions_.erase(std::unique(solutions_.begin(), solutions_.end()), solutions_.end());
}

EnumeratedSolver EnumeratedSolver::from(const Solver& inner, std::size_t budget) {
  auto all = inner.enumerate(budget);
  if (!all) {
    throw CapacityError(inner.name() + " cannot be enumerated within " + std::to_string(budget) +
                        " candidates");
  }
  return EnumeratedSolver(std::move(*all), "oracle:" + inner.name());
}

Solution EnumeratedSolver::solve(std::span<const double> w) const {
  require_length(w.size(), dimension_, "oracle weights");
  return brute_force_oracle(solutions_, w);
}

bool EnumeratedSolver::feasible(std::span<const std::uint8_t> indicator) const {
  const Indicator y(indicator.begin(), indicator.end());
  return std::binary_search(solutions_.begin(), solutions_.end(), y);
}

std::optional<std::vector<Indicator>> EnumeratedSolver::enumerate(std::size_t budget) const {
  if (solutions_.size() > budget) return std::nullopt;
  return solutions_;
}

}  // namespace combigrad::solvers
