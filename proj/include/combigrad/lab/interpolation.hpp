#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "combigrad/solver.hpp"

namespace combigrad::lab {

// Absolute tolerance for deciding f_lambda(w) == f(y(w)).
inline constexpr double kEqualityTolerance = 1e-9;

// First-order model of the downstream loss around a base solution:
// f(y) = base_loss + grad . (phi(y) - phi(base)).
struct Linearization {
  Indicator base;
  double base_loss = 0.0;
  std::vector<double> grad;
};

double eval_f(const Linearization& lin, std::span<const std::uint8_t> y);

// Everything computed while evaluating the interpolation at one weight vector.
struct InterpolationPoint {
  Indicator y;         // y(w) = solve(w)
  Indicator y_lambda;  // solve(w + lambda * grad)
  double f_y = 0.0;
  double f_y_lambda = 0.0;
  double f_lambda = 0.0;

  // w is in W_eq: f_lambda(w) agrees with f(y(w)).
  bool agrees() const;
};

// f_lambda(w) = f(y_lambda(w)) - [c(w, y(w)) - c(w, y_lambda(w))] / lambda,
// with y_lambda obtained from a single solve at w + lambda * grad.
InterpolationPoint evaluate(const Solver& solver, const Linearization& lin,
                            std::span<const double> w, double lambda);

double eval_f_lambda(const Solver& solver, const Linearization& lin, std::span<const double> w,
                     double lambda);

// y_lambda straight from its definition, argmin over Y of c(w,y) + lambda f(y),
// by enumeration. Same tie rule as the brute-force oracle.
Indicator perturbed_argmin_enumerated(std::span<const Indicator> candidates,
                                      const Linearization& lin, std::span<const double> w,
                                      double lambda);

// Gradient of f_lambda at w, identical to the backward pass with grad_y = lin.grad.
std::vector<double> f_lambda_gradient(const InterpolationPoint& p, double lambda);

struct ContinuityReport {
  bool pass = false;
  std::size_t steps = 0;
  double max_adjacent_diff = 0.0;
  double lipschitz_estimate = 0.0;  // 1.5 x largest sampled directional slope
  double allowed_diff = 0.0;
  std::vector<std::size_t> violations;  // i such that |v[i+1] - v[i]| > allowed
  // Largest deviation of the samples from the chord between the endpoints;
  // zero iff the function is affine along the segment.
  double affine_residual = 0.0;
};

enum class Sampled { kInterpolation, kPiecewiseConstant };

// Samples f_lambda (or, as a control, f(y(w))) at steps + 1 evenly spaced
// points of the segment. Slopes come from the analytic gradient at each sample
// (zero for the piecewise-constant control), so any jump in value between two
// neighbors is caught. Throws InputError for steps < 100.
ContinuityReport check_continuity(const Solver& solver, const Linearization& lin,
                                  std::span<const double> w_a, std::span<const double> w_b,
                                  double lambda, std::size_t steps,
                                  Sampled what = Sampled::kInterpolation);

// Continuity of a pre-sampled line: values[i] with directional slopes[i] at
// spacing `step_length`. `slope_floor` raises the slope estimate, for callers
// that sampled the same direction elsewhere.
ContinuityReport continuity_from_samples(std::span<const double> values,
                                         std::span<const double> slopes, double step_length,
                                         double slope_floor = 0.0);

struct MonotoneReport {
  bool pass = false;
  std::size_t violations = 0;              // w in W_eq(l2) but not in W_eq(l1), l1 < l2
  std::vector<double> lambdas;
  std::vector<double> w_diff_fraction;     // per lambda
};

// Checks that W_diff grows with lambda on the given samples. Throws InputError
// unless lambdas are positive and strictly ascending.
MonotoneReport check_monotone_sets(const Solver& solver, const Linearization& lin,
                                   std::span<const std::vector<double>> samples,
                                   std::span<const double> lambdas);

struct GradientReport {
  std::vector<double> analytic;
  std::vector<double> finite_difference;
  double eps = 0.0;
  double max_abs_deviation = 0.0;  // over coordinates whose stencil stays in one region
  bool kink_adjacent = false;      // some stencil point changes y or y_lambda
  bool matched = false;            // no kink and deviation within tolerance
  // Deviation on a coordinate whose stencil does not cross a region boundary.
  bool failed() const { return max_abs_deviation > kGradientTolerance; }

  static constexpr double kGradientTolerance = 1e-6;
};

// Compares the backward-pass gradient with central differences of f_lambda.
// eps <= 0 selects the default 1e-5 * max|w| (1e-5 if w = 0).
GradientReport check_gradient(const Solver& solver, const Linearization& lin,
                              std::span<const double> w, double lambda, double eps = 0.0);

// K = max over distinct y1, y2 of |f(y1) - f(y2)| / ||y1 - y2||, the bound on
// how far the perturbed decision boundaries shift per unit of lambda.
double displacement_bound(std::span<const Indicator> candidates, const Linearization& lin);

// For a one-dimensional problem (N = 1): the left end of the interval of
// W_diff adjacent to the jump of y(w) at `jump`, found by bisection on
// [search_lo, jump]. Returns {attainment point, distance from the jump}.
std::pair<double, double> measure_displacement_1d(const Solver& solver, const Linearization& lin,
                                                  double lambda, double jump, double search_lo);

}  // namespace combigrad::lab
