#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "combigrad/blackbox.hpp"
#include "combigrad/error.hpp"
#include "combigrad/solvers/brute_force.hpp"
#include "combigrad/solvers/grid_path.hpp"
#include "combigrad/solvers/matching.hpp"
#include "combigrad/solvers/tsp.hpp"

using namespace combigrad;
using solvers::EnumeratedSolver;

namespace {

EnumeratedSolver two_choice() { return EnumeratedSolver({{1, 0}, {0, 1}}); }

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST_CASE("forward picks the minimizer and saves the state") {
  const auto solver = two_choice();
  const std::vector<double> w{1.0, 2.0};
  auto [y, state] = forward(solver, w, 3.0);
  CHECK(y.indicator == Indicator{1, 0});
  CHECK(y.objective == 1.0);
  CHECK(state.w_hat == w);
  CHECK(state.y_hat == y);
  CHECK(state.lambda == 3.0);
}

TEST_CASE("forward on zero weights returns the tie-break choice with objective 0") {
  const solvers::TspSolver tsp(solvers::TspInstance{5});
  const std::vector<double> zeros(tsp.dimension(), 0.0);
  auto [y1, s1] = forward(tsp, zeros, 1.0);
  auto [y2, s2] = forward(tsp, zeros, 1.0);
  CHECK(y1.objective == 0.0);
  CHECK(y1 == y2);
  CHECK(tsp.feasible(y1.indicator));

  const auto pair = two_choice();
  auto [y, s] = forward(pair, std::vector<double>{0.0, 0.0}, 1.0);
  CHECK(y.indicator == Indicator{1, 0});
  CHECK(y.objective == 0.0);
}

TEST_CASE("forward on the 2x2 grid goes down then right") {
  const solvers::GridPathSolver sp(solvers::GridGraph{2, 4});
  auto [y, state] = forward(sp, std::vector<double>{1, 100, 1, 1}, 1.0);
  CHECK(y.indicator == Indicator{1, 0, 1, 1});
  CHECK(y.objective == 3.0);
}

TEST_CASE("forward rejects bad input") {
  const auto solver = two_choice();
  CHECK_THROWS_AS(forward(solver, std::vector<double>{1.0}, 1.0), InstanceError);
  CHECK_THROWS_AS(forward(solver, std::vector<double>{1.0, NAN}, 1.0), InputError);
  CHECK_THROWS_AS(forward(solver, std::vector<double>{1.0, INFINITY}, 1.0), InputError);
  CHECK_THROWS_AS(forward(solver, std::vector<double>{1.0, 2.0}, 0.0), InputError);
  CHECK_THROWS_AS(forward(solver, std::vector<double>{1.0, 2.0}, -1.0), InputError);
}

TEST_CASE("backward with zero incoming gradient is exactly zero") {
  const auto solver = two_choice();
  auto [y, state] = forward(solver, std::vector<double>{1.0, 1.0}, 1.0);
  const auto g = backward(solver, state, std::vector<double>{0.0, 0.0});
  CHECK(g == std::vector<double>{0.0, 0.0});
  CHECK_FALSE(std::signbit(g[0]));
}

TEST_CASE("backward on the tied two-choice problem") {
  const auto solver = two_choice();
  auto [y, state] = forward(solver, std::vector<double>{1.0, 1.0}, 1.0);
  REQUIRE(y.indicator == Indicator{1, 0});
  // w' = (2, 0) -> y_lambda = (0, 1)
  CHECK(backward(solver, state, std::vector<double>{1.0, -1.0}) == std::vector<double>{-1.0, 1.0});

  auto [y2, small] = forward(solver, std::vector<double>{1.0, 1.0}, 0.1);
  // w' = (1.001, 0.999) -> y_lambda = (0, 1); gradient scales with 1/lambda
  const auto g = backward(solver, small, std::vector<double>{0.01, -0.01});
  CHECK(g[0] == doctest::Approx(-10.0).epsilon(1e-12));
  CHECK(g[1] == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("backward rejects non-finite gradients") {
  const auto solver = two_choice();
  auto [y, state] = forward(solver, std::vector<double>{1.0, 2.0}, 1.0);
  CHECK_THROWS_AS(backward(solver, state, std::vector<double>{NAN, 0.0}), InputError);
  CHECK_THROWS_AS(backward(solver, state, std::vector<double>{0.0}), InstanceError);
}

TEST_CASE("backward makes exactly one solver call") {
  const solvers::MatchingSolver pm(solvers::MatchingInstance{4});
  CountingSolver counted(pm);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto w = random_vector(rng, pm.dimension(), -5, 5);
    const auto g = random_vector(rng, pm.dimension(), -1, 1);
    auto [y, state] = forward(counted, w, 10.0);
    counted.reset();
    backward(counted, state, g);
    CHECK(counted.calls() == 1);
  }
}

TEST_CASE("backward entries are -(y_hat - y_lambda)/lambda") {
  const solvers::TspSolver tsp(solvers::TspInstance{6});
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const double lambda = std::uniform_real_distribution<double>(0.1, 20.0)(rng);
    const auto w = random_vector(rng, tsp.dimension(), 0, 1);
    const auto grad = random_vector(rng, tsp.dimension(), -1, 1);
    auto [y, state] = forward(tsp, w, lambda);
    const auto g = backward(tsp, state, grad);

    std::vector<double> w_prime(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) w_prime[i] = w[i] + lambda * grad[i];
    const auto y_lambda = tsp.solve(w_prime);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double expected = -(double(y.indicator[i]) - double(y_lambda.indicator[i])) / lambda;
      CHECK(g[i] == expected);
      const bool member = g[i] == 0.0 || g[i] == 1.0 / lambda || g[i] == -1.0 / lambda;
      CHECK(member);
    }
  }
}

TEST_CASE("perturbed problem: one solve at w + lambda*grad equals the enumerated argmin") {
  // argmin_y c(w,y) + lambda * f(y) with f(y) = L + grad . (y - y_hat)
  const solvers::GridPathSolver sp(solvers::GridGraph{3, 8});
  const auto all = *sp.enumerate(solvers::kEnumerationBudget);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const double lambda = std::uniform_real_distribution<double>(0.5, 5.0)(rng);
    const auto w = random_vector(rng, sp.dimension(), 2, 10);
    const auto grad = random_vector(rng, sp.dimension(), -0.3, 0.3);
    const auto y_hat = sp.solve(w);

    const Indicator* best = nullptr;
    double best_value = 0.0;
    for (const auto& y : all) {
      double f = 1.5;
      for (std::size_t i = 0; i < y.size(); ++i) f += grad[i] * (double(y[i]) - y_hat.indicator[i]);
      const double value = dot(w, y) + lambda * f;
      if (best == nullptr || value < best_value) {
        best = &y;
        best_value = value;
      }
    }
    std::vector<double> w_prime(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) w_prime[i] = w[i] + lambda * grad[i];
    CHECK(sp.solve(w_prime).indicator == *best);
  }
}

TEST_CASE("forward and backward are deterministic") {
  const solvers::MatchingSolver pm(solvers::MatchingInstance{4});
  std::mt19937_64 rng(5);
  const auto w = random_vector(rng, pm.dimension(), 0, 99);
  const auto grad = random_vector(rng, pm.dimension(), -1, 1);
  auto [y1, s1] = forward(pm, w, 10.0);
  auto [y2, s2] = forward(pm, w, 10.0);
  CHECK(y1 == y2);
  CHECK(backward(pm, s1, grad) == backward(pm, s2, grad));
}

TEST_CASE("suggest_lambda matches mean magnitudes") {
  CHECK(*suggest_lambda(std::vector<double>{10.0, -10.0}, std::vector<double>{1.0, -1.0}) == 10.0);
  CHECK(*suggest_lambda(std::vector<double>{3.0, -1.0}, std::vector<double>{-2.0, 2.0}) == 1.0);
  CHECK(*suggest_lambda(std::vector<double>{5.0, 5.0, -5.0, 5.0},
                        std::vector<double>{0.25, -0.25, 0.25, -0.25}) == 20.0);
  // signed means would cancel to zero here
  CHECK(*suggest_lambda(std::vector<double>{2.0, 2.0}, std::vector<double>{0.5, -0.5}) == 4.0);
  CHECK_FALSE(suggest_lambda(std::vector<double>{1.0, 2.0}, std::vector<double>{0.0, 0.0}));
}
