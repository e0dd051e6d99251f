#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace combigrad {

using Indicator = std::vector<std::uint8_t>;

// A solver output: the 0/1 embedding of a discrete solution together with its
// linear cost at the weights it was solved for.
struct Solution {
  Indicator indicator;
  double objective = 0.0;

  friend bool operator==(const Solution&, const Solution&) = default;
};

double dot(std::span<const double> w, std::span<const std::uint8_t> indicator);

// Throws InputError naming `what` if any entry is NaN or infinite.
void require_finite(std::span<const double> values, const char* what);

// Throws InstanceError if `values.size() != expected`.
void require_length(std::size_t actual, std::size_t expected, const char* what);

// Minimizer of w . phi(y) over a fixed finite set Y.
//
// Implementations are immutable after construction, so `solve` may be called
// from several threads at once. Ties between co-optimal solutions are broken
// deterministically; each solver documents how.
class Solver {
 public:
  virtual ~Solver() = default;

  virtual std::string name() const = 0;

  // Length N of weight and indicator vectors.
  virtual std::size_t dimension() const = 0;

  virtual Solution solve(std::span<const double> w) const = 0;

  virtual bool feasible(std::span<const std::uint8_t> indicator) const = 0;

  // False for heuristics whose output is feasible but not certified optimal.
  virtual bool exact() const { return true; }

  // All of Y, for small instances. Returns nullopt when |Y| would exceed
  // `budget` or the family does not support enumeration.
  virtual std::optional<std::vector<Indicator>> enumerate(std::size_t budget) const {
    (void)budget;
    return std::nullopt;
  }
};

// Forwards to another solver and counts `solve` invocations.
class CountingSolver final : public Solver {
 public:
  explicit CountingSolver(const Solver& inner) : inner_(inner) {}

  std::string name() const override { return inner_.name(); }
  std::size_t dimension() const override { return inner_.dimension(); }
  Solution solve(std::span<const double> w) const override {
    calls_.fetch_add(1, std::memory_order_relaxed);
    return inner_.solve(w);
  }
  bool feasible(std::span<const std::uint8_t> indicator) const override {
    return inner_.feasible(indicator);
  }
  bool exact() const override { return inner_.exact(); }
  std::optional<std::vector<Indicator>> enumerate(std::size_t budget) const override {
    return inner_.enumerate(budget);
  }

  std::size_t calls() const { return calls_.load(); }
  void reset() { calls_.store(0); }

 private:
  const Solver& inner_;
  mutable std::atomic<std::size_t> calls_{0};
};

}  // namespace combigrad
