// Acceptance suite: one [PASS]/[FAIL] line per criterion. Exit status is the
// number of failing criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "combigrad/blackbox.hpp"
#include "combigrad/harness/experiment.hpp"
#include "combigrad/lab/interpolation.hpp"
#include "combigrad/lab/landscape.hpp"
#include "combigrad/lab/sampling.hpp"
#include "combigrad/lab/toys.hpp"
#include "combigrad/solvers/brute_force.hpp"
#include "combigrad/solvers/registry.hpp"

using namespace combigrad;
using solvers::Family;

namespace {

constexpr Family kFamilies[] = {Family::kShortestPath, Family::kTsp, Family::kMatching};
constexpr std::uint64_t kSeeds[] = {1, 2, 3};

struct Outcome {
  bool pass = false;
  std::string detail;
};

template <typename... Args>
std::string format(const char* fmt, Args... args) {
  char buf[768];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

int property_k(Family f) { return f == Family::kTsp ? 5 : 4; }

std::unique_ptr<Solver> property_solver(Family f) {
  return solvers::make_solver({f, property_k(f), 8, false});
}

Outcome oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  struct Case {
    solvers::InstanceSpec spec;
    int trials;
  };
  std::vector<Case> cases;
  for (int k = 2; k <= 4; ++k) {
    cases.push_back({{Family::kShortestPath, k, 4, false}, 34});
    cases.push_back({{Family::kShortestPath, k, 8, false}, 34});
  }
  for (int k = 3; k <= 5; ++k) cases.push_back({{Family::kTsp, k, 8, false}, 70});
  cases.push_back({{Family::kMatching, 4, 8, false}, 210});

  int counts[3] = {0, 0, 0};
  int mismatches = 0;
  for (const Case& c : cases) {
    const auto solver = solvers::make_solver(c.spec);
    const auto all = solver->enumerate(solvers::kEnumerationBudget);
    if (!all) return {false, "oracle equivalence: enumeration budget exceeded"};
    for (int t = 0; t < c.trials; ++t) {
      const auto w = lab::random_weights(c.spec.family, solver->dimension(), rng);
      const auto got = solver->solve(w);
      const auto want = solvers::brute_force_oracle(*all, w);
      if (!solver->feasible(got.indicator) || got.objective != want.objective) ++mismatches;
      ++counts[static_cast<int>(c.spec.family)];
    }
  }
  const double elapsed = seconds_since(start);
  const bool enough = std::min({counts[0], counts[1], counts[2]}) >= 200;
  return {mismatches == 0 && enough && elapsed < 60.0,
          format("oracle equivalence: %d sp, %d tsp, %d pm instances, %d mismatches, %.1f s "
                 "(need 0, >= 200 per family, < 60 s)",
                 counts[0], counts[1], counts[2], mismatches, elapsed)};
}

Outcome single_call_backward() {
  std::mt19937_64 rng(202);
  int invocations = 0;
  int bad = 0;
  for (Family f : kFamilies) {
    const auto solver = property_solver(f);
    CountingSolver counted(*solver);
    for (int t = 0; t < 100; ++t) {
      const double lambda = 1.0 + t % 20;
      const auto w = lab::random_weights(f, solver->dimension(), rng);
      const auto lin = lab::random_linearization(*solver, f, lab::gradient_scale(f, lambda), rng);
      const auto state = forward(counted, w, lambda).second;
      counted.reset();
      backward(counted, state, lin.grad);
      if (counted.calls() != 1) ++bad;
      ++invocations;
    }
  }
  return {bad == 0, format("single-call backward: %d backward passes, %d with a solver call "
                           "count other than 1",
                           invocations, bad)};
}

Outcome sandwich() {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> lam(0.01, 20.0);
  std::vector<std::unique_ptr<Solver>> solvers_by_family;
  for (Family f : kFamilies) solvers_by_family.push_back(property_solver(f));
  int violations = 0;
  double worst = 0.0;
  const int triples = 10000;
  for (int t = 0; t < triples; ++t) {
    const Family f = kFamilies[t % 3];
    const Solver& solver = *solvers_by_family[t % 3];
    const double lambda = lam(rng);
    const auto lin = lab::random_linearization(solver, f, lab::gradient_scale(f, lambda), rng);
    const auto w = lab::random_weights(f, solver.dimension(), rng);
    const auto p = lab::evaluate(solver, lin, w, lambda);
    const double excess = std::max(p.f_y_lambda - p.f_lambda, p.f_lambda - p.f_y);
    worst = std::max(worst, excess);
    if (excess > 1e-9) ++violations;
  }
  return {violations == 0,
          format("sandwich inequality: %d triples, %d violations beyond 1e-9 (largest excess %.2e)",
                 triples, violations, worst)};
}

Outcome monotone_sets() {
  std::mt19937_64 rng(404);
  const std::vector<double> lambdas{0.1, 1.0, 5.0, 10.0, 20.0};
  std::size_t violations = 0;
  std::string fractions;
  for (Family f : kFamilies) {
    const auto solver = property_solver(f);
    const auto lin = lab::random_linearization(*solver, f, lab::gradient_scale(f, 20.0), rng);
    std::vector<std::vector<double>> samples;
    for (int i = 0; i < 1000; ++i) {
      samples.push_back(lab::random_weights(f, solver->dimension(), rng));
    }
    const auto r = lab::check_monotone_sets(*solver, lin, samples, lambdas);
    violations += r.violations;
    fractions += format(" %s %.3f..%.3f", solvers::to_string(f).c_str(),
                        r.w_diff_fraction.front(), r.w_diff_fraction.back());
  }

  // 1D toy: W_diff = (-lambda, 0], counted directly on the sample grid.
  const auto toy = lab::toy_1d();
  const auto toy_lin = lab::toy_1d_linearization();
  std::vector<std::vector<double>> grid;
  for (int i = 0; i <= 3000; ++i) grid.push_back({(i - 2500) / 100.0});
  const std::vector<double> toy_lambdas{0.1, 20.0};
  const auto r = lab::check_monotone_sets(toy, toy_lin, grid, toy_lambdas);
  bool exact = true;
  for (std::size_t j = 0; j < toy_lambdas.size(); ++j) {
    std::size_t inside = 0;
    for (const auto& w : grid) inside += w[0] > -toy_lambdas[j] && w[0] <= 0.0;
    exact = exact && r.w_diff_fraction[j] == static_cast<double>(inside) / grid.size();
  }
  const bool grows = r.w_diff_fraction[0] < r.w_diff_fraction[1];
  return {violations == 0 && r.violations == 0 && exact && grows,
          format("monotone W-sets: %zu violations over 1000 points per family, W_diff fraction "
                 "at lambda 0.1..20:%s; toy %.4f < %.4f, closed form %s",
                 violations, fractions.c_str(), r.w_diff_fraction[0], r.w_diff_fraction[1],
                 exact ? "exact" : "MISMATCH")};
}

Outcome gradient_check() {
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> lam(1.0, 20.0);
  std::string per_family;
  bool pass = true;
  for (Family f : kFamilies) {
    const auto solver = property_solver(f);
    int matched = 0;
    int unflagged = 0;
    const int points = 200;
    for (int t = 0; t < points; ++t) {
      const double lambda = lam(rng);
      const auto lin = lab::random_linearization(*solver, f, lab::gradient_scale(f, 20.0), rng);
      const auto w = lab::random_weights(f, solver->dimension(), rng);
      const auto r = lab::check_gradient(*solver, lin, w, lambda);
      if (r.matched) {
        ++matched;
      } else if (!r.kink_adjacent || r.failed()) {
        ++unflagged;
      }
    }
    pass = pass && matched >= 180 && unflagged == 0;
    per_family += format(" %s %d/%d (%d unflagged)", solvers::to_string(f).c_str(), matched,
                         points, unflagged);
  }
  return {pass, format("gradient vs central differences within 1e-6:%s (need >= 90%%, every "
                       "mismatch kink-adjacent)",
                       per_family.c_str())};
}

Outcome landscape() {
  const auto toy = lab::toy_three_region();
  const auto lin = lab::toy_three_region_linearization();
  const std::vector<double> origin{-30.0, -30.0};
  const std::vector<double> u{60.0, 0.0};
  const std::vector<double> v{0.0, 60.0};
  double previous = -1.0;
  bool growing = true;
  bool continuous = true;
  double slowest = 0.0;
  std::string fractions;
  for (double lambda : {3.0, 10.0, 20.0}) {
    const auto start = std::chrono::steady_clock::now();
    const auto grid = lab::render_landscape(toy, lin, origin, u, v, lambda, 256, 256);
    const auto c = lab::check_grid_continuity(grid);
    slowest = std::max(slowest, seconds_since(start));
    const double fraction = grid.w_diff_fraction();
    growing = growing && fraction > previous;
    continuous = continuous && c.pass;
    previous = fraction;
    fractions += format(" %.4f", fraction);
  }
  return {growing && continuous && slowest < 30.0,
          format("landscape at 256x256, lambda 3/10/20: interpolated fractions%s, continuity %s, "
                 "slowest grid %.2f s (need < 30 s)",
                 fractions.c_str(), continuous ? "passes" : "FAILS", slowest)};
}

struct LearningRuns {
  std::vector<double> sp;
  std::vector<double> sp_small_lambda;
  std::vector<double> pm;
  std::vector<double> tsp;
  std::vector<double> approx_gap;
  std::vector<double> approx_embedding;
  std::vector<double> approx_truth;
  std::vector<double> procrustes;
  double slowest = 0.0;
};

LearningRuns run_learning() {
  LearningRuns out;
  const auto sp = harness::experiment_preset(Family::kShortestPath, 6);
  auto sp_small = sp;
  sp_small.train.lambda = 0.001;
  const auto pm = harness::experiment_preset(Family::kMatching, 4);
  auto tsp = harness::experiment_preset(Family::kTsp, 5);
  tsp.data.test_size = 1000;
  for (std::uint64_t seed : kSeeds) {
    const auto a = harness::run_experiment(sp, seed);
    const auto b = harness::run_experiment(sp_small, seed);
    const auto c = harness::run_experiment(pm, seed);
    const auto d = harness::compare_solvers(tsp, seed);
    out.sp.push_back(a.final_test_acc);
    out.sp_small_lambda.push_back(b.final_test_acc);
    out.pm.push_back(c.final_test_acc);
    out.tsp.push_back(d.exact.final_test_acc);
    out.approx_embedding.push_back(d.approximate.final_test_acc);
    out.approx_truth.push_back(d.approx_on_truth);
    out.approx_gap.push_back(std::abs(d.approximate.final_test_acc - d.approx_on_truth));
    out.procrustes.push_back(d.exact.procrustes ? d.exact.procrustes->mean_offset : M_PI);
    for (double s : {a.wall_seconds, b.wall_seconds, c.wall_seconds, d.exact.wall_seconds,
                     d.approximate.wall_seconds}) {
      out.slowest = std::max(out.slowest, s);
    }
  }
  return out;
}

std::string list(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += format("%s%.3f", s.empty() ? "" : " ", x);
  return s;
}

Outcome end_to_end(const LearningRuns& r) {
  const double sp = median(r.sp);
  const double tsp = median(r.tsp);
  const double pm = median(r.pm);
  return {sp >= 0.90 && tsp >= 0.90 && pm >= 0.85 && r.slowest <= 600.0,
          format("end-to-end test accuracy, median of 3 seeds: sp(6) %.3f [%s] >= 0.90, "
                 "tsp(5) %.3f [%s] >= 0.90, pm(4) %.3f [%s] >= 0.85; slowest run %.1f s <= 600 s",
                 sp, list(r.sp).c_str(), tsp, list(r.tsp).c_str(), pm, list(r.pm).c_str(),
                 r.slowest)};
}

Outcome small_lambda(const LearningRuns& r) {
  const double base = median(r.sp);
  const double small = median(r.sp_small_lambda);
  return {small <= base - 0.20,
          format("lambda 0.001 control: sp(6) median %.3f [%s] vs %.3f at the preset lambda "
                 "(need >= 20 points lower)",
                 small, list(r.sp_small_lambda).c_str(), base)};
}

Outcome approximate_solver(const LearningRuns& r) {
  const double gap = median(r.approx_gap);
  return {gap <= 0.02 + 1e-12,
          format("approximate solver: 2-opt embedding [%s] vs 2-opt on hidden locations [%s], "
                 "median gap %.3f (need <= 0.020, 1000 test tours)",
                 list(r.approx_embedding).c_str(), list(r.approx_truth).c_str(), gap)};
}

Outcome procrustes(const LearningRuns& r) {
  const double offset = median(r.procrustes);
  return {offset <= 0.15, format("procrustes recovery: median aligned offset %.4f rad [%s] "
                                 "(need <= 0.15)",
                                 offset, list(r.procrustes).c_str())};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const Outcome& o) {
    std::printf("[%s] %d %s\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  };
  report(1, oracle_equivalence());
  report(2, single_call_backward());
  report(3, sandwich());
  report(4, monotone_sets());
  report(5, gradient_check());
  report(6, landscape());
  const LearningRuns runs = run_learning();
  report(7, end_to_end(runs));
  report(8, small_lambda(runs));
  report(9, approximate_solver(runs));
  report(10, procrustes(runs));
  return failures;
}
