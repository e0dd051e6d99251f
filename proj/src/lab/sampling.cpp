#include "combigrad/lab/sampling.hpp"

#include <algorithm>

namespace combigrad::lab {

using solvers::Family;

std::vector<double> random_weights(Family family, std::size_t n, std::mt19937_64& rng) {
  double lo = 1.0;
  double hi = 10.0;
  if (family == Family::kTsp) {
    lo = 0.0;
    hi = 2.0;
  } else if (family == Family::kMatching) {
    lo = -5.0;
    hi = 5.0;
  }
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> w(n);
  for (auto& x : w) x = dist(rng);
  return w;
}

double gradient_scale(Family family, double lambda_max) {
  switch (family) {
    case Family::kShortestPath:
      return 0.9 / lambda_max;
    case Family::kTsp:
      return 2.0 / lambda_max;
    case Family::kMatching:
      return 10.0 / lambda_max;
  }
  return 1.0;
}

Linearization random_linearization(const Solver& solver, Family family, double scale,
                                   std::mt19937_64& rng) {
  const std::size_t n = solver.dimension();
  Linearization lin;
  lin.base = solver.solve(random_weights(family, n, rng)).indicator;
  lin.base_loss = std::uniform_real_distribution<double>(0.0, 5.0)(rng);
  std::uniform_real_distribution<double> g(-scale, scale);
  lin.grad.resize(n);
  for (auto& x : lin.grad) x = g(rng);
  return lin;
}

Slice boundary_slice(const Solver& solver, Family family, std::mt19937_64& rng) {
  const std::size_t n = solver.dimension();
  std::vector<double> w0;
  double spread = 5.0;
  if (family == Family::kShortestPath) {
    std::uniform_real_distribution<double> cost(3.0, 7.0);
    w0.resize(n);
    for (auto& x : w0) x = cost(rng);
    spread = 1.0;
  } else {
    w0 = random_weights(family, n, rng);
    if (family == Family::kTsp) spread = 0.5;
  }

  const Indicator first = solver.solve(w0).indicator;
  Indicator second = first;
  for (int tries = 0; tries < 64 && second == first; ++tries) {
    second = solver.solve(random_weights(family, n, rng)).indicator;
  }

  // Along w0 - alpha d the cost gap c(second) - c(first) shrinks by alpha |d|^2.
  std::vector<double> d(n);
  double dd = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = static_cast<double>(second[i]) - static_cast<double>(first[i]);
    dd += d[i] * d[i];
  }
  double alpha = 0.0;
  if (dd > 0.0) {
    alpha = std::max(2.0 * (dot(w0, second) - dot(w0, first)) / dd, spread);
    if (family == Family::kShortestPath) {
      for (std::size_t i = 0; i < n; ++i) {
        if (d[i] > 0.0) alpha = std::min(alpha, w0[i] - 0.5 * spread - 1.0);
      }
    }
  }

  Slice s;
  s.u.resize(n);
  s.v.resize(n);
  s.origin.resize(n);
  std::uniform_real_distribution<double> axis(-spread, spread);
  for (std::size_t i = 0; i < n; ++i) {
    s.u[i] = -alpha * d[i];
    s.v[i] = axis(rng);
    s.origin[i] = w0[i] - 0.5 * s.v[i];
  }
  return s;
}

}  // namespace combigrad::lab
