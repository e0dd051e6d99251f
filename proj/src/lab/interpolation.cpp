#include "combigrad/lab/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "combigrad/error.hpp"

namespace combigrad::lab {

namespace {

void require_positive(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InputError("lambda must be a positive finite number");
  }
}

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

double eval_f(const Linearization& lin, std::span<const std::uint8_t> y) {
  require_length(y.size(), lin.base.size(), "solution");
  require_length(lin.grad.size(), lin.base.size(), "linearization gradient");
  double delta = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const int d = static_cast<int>(y[i]) - static_cast<int>(lin.base[i]);
    if (d != 0) delta += lin.grad[i] * d;
  }
  return lin.base_loss + delta;
}

bool InterpolationPoint::agrees() const {
  return std::abs(f_lambda - f_y) <= kEqualityTolerance;
}

InterpolationPoint evaluate(const Solver& solver, const Linearization& lin,
                            std::span<const double> w, double lambda) {
  require_positive(lambda);
  const std::size_t n = solver.dimension();
  require_length(w.size(), n, "weights");
  require_length(lin.grad.size(), n, "linearization gradient");

  InterpolationPoint p;
  p.y = solver.solve(w).indicator;
  if (lin.grad.empty() ||
      std::all_of(lin.grad.begin(), lin.grad.end(), [](double g) { return g == 0.0; })) {
    p.y_lambda = p.y;
  } else {
    std::vector<double> w_prime(n);
    for (std::size_t i = 0; i < n; ++i) w_prime[i] = w[i] + lambda * lin.grad[i];
    p.y_lambda = solver.solve(w_prime).indicator;
  }
  p.f_y = eval_f(lin, p.y);
  p.f_y_lambda = eval_f(lin, p.y_lambda);
  if (p.y == p.y_lambda) {
    p.f_lambda = p.f_y;
  } else {
    // c(w, y) - c(w, y_lambda) summed over the differing entries only.
    double gap = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      gap += w[i] * (static_cast<int>(p.y[i]) - static_cast<int>(p.y_lambda[i]));
    }
    p.f_lambda = p.f_y_lambda - gap / lambda;
  }
  return p;
}

double eval_f_lambda(const Solver& solver, const Linearization& lin, std::span<const double> w,
                     double lambda) {
  return evaluate(solver, lin, w, lambda).f_lambda;
}

Indicator perturbed_argmin_enumerated(std::span<const Indicator> candidates,
                                      const Linearization& lin, std::span<const double> w,
                                      double lambda) {
  require_positive(lambda);
  if (candidates.empty()) throw InstanceError("empty candidate set");
  const Indicator* best = nullptr;
  double best_cost = std::numeric_limits<double>::infinity();
  for (const Indicator& y : candidates) {
    const double c = dot(w, y) + lambda * eval_f(lin, y);
    if (best == nullptr || c < best_cost || (c == best_cost && y > *best)) {
      best = &y;
      best_cost = c;
    }
  }
  return *best;
}

std::vector<double> f_lambda_gradient(const InterpolationPoint& p, double lambda) {
  require_positive(lambda);
  std::vector<double> g(p.y.size());
  const double inv = 1.0 / lambda;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const int diff = static_cast<int>(p.y[i]) - static_cast<int>(p.y_lambda[i]);
    g[i] = diff == 0 ? 0.0 : -diff * inv;
  }
  return g;
}

ContinuityReport continuity_from_samples(std::span<const double> values,
                                         std::span<const double> slopes, double step_length,
                                         double slope_floor) {
  if (values.size() < 2 || slopes.size() != values.size()) {
    throw InputError("continuity check needs matching values and slopes, at least two samples");
  }
  ContinuityReport r;
  r.steps = values.size() - 1;
  double max_slope = slope_floor;
  for (double s : slopes) max_slope = std::max(max_slope, std::abs(s));
  r.lipschitz_estimate = 1.5 * max_slope;
  r.allowed_diff = r.lipschitz_estimate * step_length + kEqualityTolerance;

  const double first = values.front();
  const double last = values.back();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(r.steps);
    r.affine_residual = std::max(r.affine_residual, std::abs(values[i] - (first + t * (last - first))));
    if (i + 1 == values.size()) break;
    const double d = std::abs(values[i + 1] - values[i]);
    r.max_adjacent_diff = std::max(r.max_adjacent_diff, d);
    if (d > r.allowed_diff) r.violations.push_back(i);
  }
  r.pass = r.violations.empty();
  return r;
}

ContinuityReport check_continuity(const Solver& solver, const Linearization& lin,
                                  std::span<const double> w_a, std::span<const double> w_b,
                                  double lambda, std::size_t steps, Sampled what) {
  if (steps < 100) throw InputError("continuity check needs at least 100 steps");
  const std::size_t n = solver.dimension();
  require_length(w_a.size(), n, "segment start");
  require_length(w_b.size(), n, "segment end");

  std::vector<double> dir(n);
  for (std::size_t i = 0; i < n; ++i) dir[i] = w_b[i] - w_a[i];
  const double length = norm(dir);

  std::vector<double> values(steps + 1);
  std::vector<double> slopes(steps + 1, 0.0);
  std::vector<double> w(n);
  for (std::size_t s = 0; s <= steps; ++s) {
    const double t = static_cast<double>(s) / static_cast<double>(steps);
    for (std::size_t i = 0; i < n; ++i) w[i] = w_a[i] + t * dir[i];
    const InterpolationPoint p = evaluate(solver, lin, w, lambda);
    if (what == Sampled::kPiecewiseConstant) {
      values[s] = p.f_y;
      continue;
    }
    values[s] = p.f_lambda;
    if (length > 0.0) {
      const std::vector<double> g = f_lambda_gradient(p, lambda);
      double dd = 0.0;
      for (std::size_t i = 0; i < n; ++i) dd += g[i] * dir[i];
      slopes[s] = dd / length;
    }
  }
  return continuity_from_samples(values, slopes, length / static_cast<double>(steps));
}

MonotoneReport check_monotone_sets(const Solver& solver, const Linearization& lin,
                                   std::span<const std::vector<double>> samples,
                                   std::span<const double> lambdas) {
  if (lambdas.empty()) throw InputError("no lambdas given");
  for (std::size_t j = 0; j < lambdas.size(); ++j) {
    require_positive(lambdas[j]);
    if (j > 0 && !(lambdas[j] > lambdas[j - 1])) {
      throw InputError("lambdas must be strictly ascending");
    }
  }

  MonotoneReport r;
  r.lambdas.assign(lambdas.begin(), lambdas.end());
  std::vector<std::size_t> in_diff(lambdas.size(), 0);
  std::vector<bool> agrees(lambdas.size());
  for (const auto& w : samples) {
    for (std::size_t j = 0; j < lambdas.size(); ++j) {
      agrees[j] = evaluate(solver, lin, w, lambdas[j]).agrees();
      if (!agrees[j]) ++in_diff[j];
    }
    for (std::size_t j = 1; j < lambdas.size(); ++j) {
      if (agrees[j] && !agrees[j - 1]) ++r.violations;
    }
  }
  for (std::size_t c : in_diff) {
    r.w_diff_fraction.push_back(samples.empty()
                                    ? 0.0
                                    : static_cast<double>(c) / static_cast<double>(samples.size()));
  }
  r.pass = r.violations == 0;
  return r;
}

GradientReport check_gradient(const Solver& solver, const Linearization& lin,
                              std::span<const double> w, double lambda, double eps) {
  const std::size_t n = solver.dimension();
  require_length(w.size(), n, "weights");
  if (eps <= 0.0) {
    double inf_norm = 0.0;
    for (double x : w) inf_norm = std::max(inf_norm, std::abs(x));
    eps = inf_norm > 0.0 ? 1e-5 * inf_norm : 1e-5;
  }

  GradientReport r;
  r.eps = eps;
  const InterpolationPoint center = evaluate(solver, lin, w, lambda);
  r.analytic = f_lambda_gradient(center, lambda);
  r.finite_difference.resize(n);

  std::vector<double> probe(w.begin(), w.end());
  for (std::size_t i = 0; i < n; ++i) {
    probe[i] = w[i] + eps;
    const InterpolationPoint plus = evaluate(solver, lin, probe, lambda);
    probe[i] = w[i] - eps;
    const InterpolationPoint minus = evaluate(solver, lin, probe, lambda);
    probe[i] = w[i];

    r.finite_difference[i] = (plus.f_lambda - minus.f_lambda) / (2.0 * eps);
    const bool crosses = plus.y != center.y || minus.y != center.y ||
                         plus.y_lambda != center.y_lambda || minus.y_lambda != center.y_lambda;
    if (crosses) {
      r.kink_adjacent = true;
      continue;
    }
    r.max_abs_deviation =
        std::max(r.max_abs_deviation, std::abs(r.finite_difference[i] - r.analytic[i]));
  }
  r.matched = !r.kink_adjacent && !r.failed();
  return r;
}

double displacement_bound(std::span<const Indicator> candidates, const Linearization& lin) {
  double k = 0.0;
  for (std::size_t a = 0; a < candidates.size(); ++a) {
    const double fa = eval_f(lin, candidates[a]);
    for (std::size_t b = a + 1; b < candidates.size(); ++b) {
      double dist2 = 0.0;
      for (std::size_t i = 0; i < candidates[a].size(); ++i) {
        const double d = static_cast<double>(candidates[a][i]) - candidates[b][i];
        dist2 += d * d;
      }
      if (dist2 == 0.0) continue;
      k = std::max(k, std::abs(fa - eval_f(lin, candidates[b])) / std::sqrt(dist2));
    }
  }
  return k;
}

std::pair<double, double> measure_displacement_1d(const Solver& solver, const Linearization& lin,
                                                  double lambda, double jump, double search_lo) {
  if (solver.dimension() != 1) throw InstanceError("displacement probe needs a 1D problem");
  if (!(search_lo < jump)) throw InputError("search interval is empty");
  auto differs = [&](double x) {
    const double w[1] = {x};
    return !evaluate(solver, lin, w, lambda).agrees();
  };
  if (differs(search_lo)) throw InputError("search interval does not start in W_eq");
  // Invariant: lo in W_eq, hi in W_diff (or the jump itself).
  double lo = search_lo;
  double hi = jump;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (differs(mid) ? hi : lo) = mid;
  }
  return {lo, jump - lo};
}

}  // namespace combigrad::lab
