#include "combigrad/blackbox.hpp"

#include <cmath>
#include <string>

#include "combigrad/error.hpp"

namespace combigrad {

namespace {

void require_positive_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InputError("lambda must be a positive finite number, got " + std::to_string(lambda));
  }
}

double mean_abs(std::span<const double> v) {
  if (v.empty()) return 0.0;
  double total = 0.0;
  for (double x : v) total += std::abs(x);
  return total / static_cast<double>(v.size());
}

}  // namespace

std::pair<Solution, LayerState> forward(const Solver& solver, std::span<const double> w_hat,
                                        double lambda) {
  require_positive_lambda(lambda);
  require_length(w_hat.size(), solver.dimension(), "forward weights");
  require_finite(w_hat, "forward weights");

  Solution y_hat = solver.solve(w_hat);
  LayerState state{std::vector<double>(w_hat.begin(), w_hat.end()), y_hat, lambda};
  return {std::move(y_hat), std::move(state)};
}

std::vector<double> backward(const Solver& solver, const LayerState& state,
                             std::span<const double> grad_y) {
  require_positive_lambda(state.lambda);
  const std::size_t n = solver.dimension();
  require_length(state.w_hat.size(), n, "saved forward weights");
  require_length(state.y_hat.indicator.size(), n, "saved forward solution");
  require_length(grad_y.size(), n, "loss gradient");
  require_finite(grad_y, "loss gradient");

  std::vector<double> w_prime(n);
  for (std::size_t i = 0; i < n; ++i) w_prime[i] = state.w_hat[i] + state.lambda * grad_y[i];

  const Solution y_lambda = solver.solve(w_prime);

  std::vector<double> grad_w(n);
  const double inv = 1.0 / state.lambda;
  for (std::size_t i = 0; i < n; ++i) {
    const int diff = static_cast<int>(state.y_hat.indicator[i]) -
                     static_cast<int>(y_lambda.indicator[i]);
    grad_w[i] = diff == 0 ? 0.0 : -diff * inv;
  }
  return grad_w;
}

std::optional<double> suggest_lambda(std::span<const double> w_sample,
                                     std::span<const double> grad_sample) {
  require_finite(w_sample, "lambda heuristic weights");
  require_finite(grad_sample, "lambda heuristic gradient");
  const double w_mag = mean_abs(w_sample);
  const double g_mag = mean_abs(grad_sample);
  if (g_mag == 0.0 || w_mag == 0.0) return std::nullopt;
  return w_mag / g_mag;
}

}  // namespace combigrad
