#pragma once

#include <array>
#include <span>

#include "combigrad/learn/tensor.hpp"
#include "combigrad/solver.hpp"

namespace combigrad::harness {

inline constexpr double kEarthRadiusKm = 6371.0;

struct AccuracyCheck {
  bool optimal = false;
  bool infeasible = false;  // flagged; never counted as optimal
};

// True iff `prediction` is feasible and its cost under the hidden weights
// equals `optimal_cost` within 1e-9. Co-optimal alternatives count as correct.
AccuracyCheck accuracy_optimal_cost(const Solver& exact, std::span<const std::uint8_t> prediction,
                                    std::span<const double> true_weights, double optimal_cost);

using Matrix3 = std::array<std::array<double, 3>, 3>;

struct ProcrustesResult {
  Matrix3 rotation{};        // orthogonal; may be a reflection
  double mean_offset = 0.0;  // mean great-circle angle in radians after alignment
  double mean_offset_km = 0.0;  // the same on a globe of radius kEarthRadiusKm
  bool degenerate = false;   // the configurations span fewer than two dimensions
};

// R = argmin over orthogonal R of sum_i ||R x_i - y_i||^2 (rows of X and Y),
// from the SVD of sum_i y_i x_i^T. Throws InputError unless both are [k, 3]
// with k >= 3 and unit-norm rows (within 1e-6).
ProcrustesResult procrustes_offset(const learn::Tensor& X, const learn::Tensor& Y);

}  // namespace combigrad::harness
