#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "combigrad/solver.hpp"

namespace combigrad {

// Everything the backward pass needs from the forward pass.
struct LayerState {
  std::vector<double> w_hat;
  Solution y_hat;
  double lambda = 0.0;
};

// Solves at w_hat and records (w_hat, y_hat, lambda).
//
// Throws InputError for lambda <= 0 or non-finite weights and InstanceError
// when w_hat does not have the solver's dimension.
std::pair<Solution, LayerState> forward(const Solver& solver, std::span<const double> w_hat,
                                        double lambda);

// Gradient of the piecewise-affine interpolation f_lambda at w_hat.
//
// Perturbs the forward weights along the incoming loss gradient,
// w' = w_hat + lambda * grad_y, solves once at w', and returns
// -(phi(y_hat) - phi(y_lambda)) / lambda. Every entry is one of
// {-1/lambda, 0, 1/lambda}. Makes exactly one solver call.
std::vector<double> backward(const Solver& solver, const LayerState& state,
                             std::span<const double> grad_y);

// Magnitude-matching choice of lambda: mean |w| / mean |grad|.
// Returns nullopt when either mean is zero, i.e. no informative lambda exists.
std::optional<double> suggest_lambda(std::span<const double> w_sample,
                                     std::span<const double> grad_sample);

}  // namespace combigrad
