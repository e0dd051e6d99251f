#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <vector>

#include "combigrad/error.hpp"
#include "combigrad/learn/adam.hpp"
#include "combigrad/learn/config.hpp"
#include "combigrad/learn/graph.hpp"
#include "combigrad/learn/model.hpp"
#include "combigrad/learn/train.hpp"
#include "combigrad/solvers/grid_path.hpp"
#include "combigrad/solvers/matching.hpp"

using namespace combigrad;
using namespace combigrad::learn;
using solvers::Family;

namespace {

using Op = std::function<Var(Graph&, const std::vector<Var>&)>;

Tensor random_tensor(std::vector<std::size_t> shape, std::mt19937_64& rng, double lo = -1.0,
                     double hi = 1.0) {
  Tensor t = Tensor::zeros(std::move(shape));
  std::uniform_real_distribution<double> d(lo, hi);
  for (double& x : t.data) x = d(rng);
  return t;
}

double weighted_output(const Op& op, const std::vector<Tensor>& inputs, const Tensor& r) {
  Graph g;
  std::vector<Var> leaves;
  for (const Tensor& t : inputs) leaves.push_back(g.leaf(t));
  const Tensor& out = g.value(op(g, leaves));
  double s = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) s += r.data[i] * out.data[i];
  return s;
}

// Largest |analytic - central difference| / max(1, |analytic|) over all inputs.
double max_rel_error(const Op& op, std::vector<Tensor> inputs, std::mt19937_64& rng,
                     double eps = 1e-6) {
  Graph g;
  std::vector<Var> leaves;
  for (const Tensor& t : inputs) leaves.push_back(g.leaf(t));
  const Var out = op(g, leaves);
  const Tensor r = random_tensor(g.value(out).shape, rng);
  g.backward(out, r);

  double worst = 0.0;
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    for (std::size_t i = 0; i < inputs[j].size(); ++i) {
      const double keep = inputs[j].data[i];
      inputs[j].data[i] = keep + eps;
      const double up = weighted_output(op, inputs, r);
      inputs[j].data[i] = keep - eps;
      const double down = weighted_output(op, inputs, r);
      inputs[j].data[i] = keep;
      const double fd = (up - down) / (2.0 * eps);
      const double a = g.grad(leaves[j]).data[i];
      worst = std::max(worst, std::abs(a - fd) / std::max(1.0, std::abs(a)));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("affine") {
  Graph g;
  const Var x = g.leaf(Tensor::matrix(1, 1, {4.0}));
  const Var w = g.leaf(Tensor::matrix(1, 1, {2.0}));
  const Var b = g.leaf(Tensor::vector({3.0}));
  const Var y = g.affine(x, w, b);
  CHECK(g.value(y).data == std::vector<double>{11.0});
  g.backward(y, Tensor::matrix(1, 1, {5.0}));
  CHECK(g.grad(w).data == std::vector<double>{20.0});
  CHECK(g.grad(x).data == std::vector<double>{10.0});
  CHECK(g.grad(b).data == std::vector<double>{5.0});

  Graph id;
  const Tensor xs = Tensor::matrix(2, 3, {1, 2, 3, 4, 5, 6});
  const Var xi = id.leaf(xs);
  const Var yi = id.affine(xi, id.leaf(Tensor::matrix(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1})),
                           id.leaf(Tensor::zeros({3})));
  CHECK(id.value(yi) == xs);
  const Tensor seed = Tensor::matrix(2, 3, {1, -1, 2, 0, 3, -2});
  id.backward(yi, seed);
  CHECK(id.grad(xi).data == seed.data);

  Graph bad;
  CHECK_THROWS_AS(bad.affine(bad.leaf(Tensor::zeros({2, 3})), bad.leaf(Tensor::zeros({3, 2})),
                             bad.leaf(Tensor::zeros({3}))),
                  InputError);

  std::mt19937_64 rng(1);
  const Op op = [](Graph& gr, const std::vector<Var>& v) { return gr.affine(v[0], v[1], v[2]); };
  CHECK(max_rel_error(op, {random_tensor({8, 8}, rng), random_tensor({8, 8}, rng),
                           random_tensor({8}, rng)},
                      rng) <= 1e-6);
}

TEST_CASE("relu and scale_shift") {
  Graph g;
  const Var x = g.leaf(Tensor::vector({-1.0, 0.0, 2.0}));
  const Var y = g.relu(x);
  CHECK(g.value(y).data == std::vector<double>{0.0, 0.0, 2.0});
  const Var z = g.scale_shift(y, 2.0, 0.5);
  CHECK(g.value(z).data == std::vector<double>{0.5, 0.5, 4.5});

  std::mt19937_64 rng(2);
  Tensor away = random_tensor({6, 4}, rng);
  for (double& v : away.data) v += v >= 0 ? 0.01 : -0.01;
  const Op relu = [](Graph& gr, const std::vector<Var>& v) { return gr.relu(v[0]); };
  CHECK(max_rel_error(relu, {away}, rng) <= 1e-6);
  const Op ss = [](Graph& gr, const std::vector<Var>& v) { return gr.scale_shift(v[0], -3.0, 1.0); };
  CHECK(max_rel_error(ss, {random_tensor({5}, rng)}, rng) <= 1e-6);
}

TEST_CASE("sphere_project") {
  Graph g;
  const Var x = g.leaf(Tensor::matrix(2, 3, {0, 0, 2, 0.6, 0.8, 0}));
  const Var u = g.sphere_project(x);
  CHECK(g.value(u).data == std::vector<double>{0, 0, 1, 0.6, 0.8, 0});
  // The radial direction of a unit row is annihilated.
  g.backward(u, Tensor::matrix(2, 3, {0, 0, 0, 0.6, 0.8, 0}));
  for (double v : g.grad(x).data) CHECK(std::abs(v) <= 1e-15);

  std::mt19937_64 rng(3);
  const Tensor rows = random_tensor({20, 3}, rng, -5.0, 5.0);
  Graph h;
  const Tensor& out = h.value(h.sphere_project(h.leaf(rows)));
  for (std::size_t r = 0; r < 20; ++r) {
    const double n = std::sqrt(out.at(r, 0) * out.at(r, 0) + out.at(r, 1) * out.at(r, 1) +
                               out.at(r, 2) * out.at(r, 2));
    CHECK(std::abs(n - 1.0) <= 1e-12);
  }

  const Op op = [](Graph& gr, const std::vector<Var>& v) { return gr.sphere_project(v[0]); };
  CHECK(max_rel_error(op, {random_tensor({6, 3}, rng)}, rng) <= 1e-6);

  Graph z;
  try {
    z.sphere_project(z.leaf(Tensor::matrix(2, 3, {1, 0, 0, 0, 0, 1e-13})));
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("row 1") != std::string::npos);
  }
}

TEST_CASE("pairwise_dist") {
  Graph g;
  const Var x = g.leaf(Tensor::matrix(3, 3, {0, 0, 1, 0, 0, -1, 1, 0, 0}));
  const Tensor& d = g.value(g.pairwise_dist(x));
  REQUIRE(d.size() == 3);
  CHECK(d.data[0] == 2.0);  // antipodal pair (0, 1)
  CHECK(d.data[1] == doctest::Approx(std::sqrt(2.0)));

  const double s = std::sqrt(3.0) / 2.0;
  Graph eq;
  const Tensor& e =
      eq.value(eq.pairwise_dist(eq.leaf(Tensor::matrix(3, 3, {1, 0, 0, -0.5, s, 0, -0.5, -s, 0}))));
  CHECK(e.data[0] == doctest::Approx(e.data[1]).epsilon(1e-14));
  CHECK(e.data[1] == doctest::Approx(e.data[2]).epsilon(1e-14));

  Graph same;
  const Var p = same.leaf(Tensor::matrix(3, 3, {1, 0, 0, 1, 0, 0, 0, 1, 0}));
  const Var dd = same.pairwise_dist(p);
  same.backward(dd, Tensor::vector({1.0, 0.0, 0.0}));
  for (double v : same.grad(p).data) CHECK(v == 0.0);

  std::mt19937_64 rng(4);
  const Op op = [](Graph& gr, const std::vector<Var>& v) { return gr.pairwise_dist(v[0]); };
  CHECK(max_rel_error(op, {random_tensor({5, 3}, rng)}, rng) <= 1e-6);
}

TEST_CASE("vertex_to_edge_cost") {
  const solvers::MatchingInstance layout{4};
  Tensor digits = Tensor::zeros({16});
  digits.data[0] = 4;  // (0,0) above (1,0)
  digits.data[4] = 6;
  Graph g;
  const Tensor& c = g.value(g.vertex_to_edge_cost(g.leaf(digits), 4));
  const std::size_t vertical = layout.horizontal_count();  // edge (0,0)-(1,0)
  REQUIRE(layout.endpoints(vertical) == std::pair<int, int>{0, 4});
  CHECK(c.data[vertical] == 46.0);
  CHECK(c.data[0] == 40.0);  // horizontal (0,0)-(0,1) reads 4 then 0

  Graph z;
  for (double v : z.value(z.vertex_to_edge_cost(z.leaf(Tensor::zeros({4, 4})), 4)).data) {
    CHECK(v == 0.0);
  }

  std::mt19937_64 rng(5);
  const Op op = [](Graph& gr, const std::vector<Var>& v) { return gr.vertex_to_edge_cost(v[0], 4); };
  CHECK(max_rel_error(op, {random_tensor({16}, rng, 0.0, 9.0)}, rng, 1e-2) <= 1e-9);
}

TEST_CASE("hamming_loss") {
  Graph g;
  const Var y = g.leaf(Tensor::vector({1, 0, 1}));
  const Indicator target{1, 1, 0};
  const Var l = g.hamming_loss(y, target);
  CHECK(g.scalar(l) == 2.0);
  g.backward(l);
  CHECK(g.grad(y).data == std::vector<double>{-1.0, -1.0, 1.0});

  Graph same;
  const Var ys = same.leaf(Tensor::vector({1, 1, 0}));
  const Var ls = same.hamming_loss(ys, target, 0.5);
  CHECK(same.scalar(ls) == 0.0);
  same.backward(ls);
  CHECK(same.grad(ys).data == std::vector<double>{-0.5, -0.5, 0.5});

  Graph bad;
  CHECK_THROWS_AS(bad.hamming_loss(bad.leaf(Tensor::vector({1, 0})), target), InstanceError);
}

TEST_CASE("descent on the solver gradient raises non-target costs") {
  // Target path avoids vertex 1; the prediction uses it.
  const solvers::GridPathSolver sp(solvers::GridGraph{2, 4});
  Graph g;
  const Var w = g.leaf(Tensor::vector({1.0, 1.0, 1.5, 1.0}));
  const Var y = g.blackbox_solve(w, sp, 0.5);
  CHECK(g.value(y).data == std::vector<double>{1, 1, 0, 1});
  const Indicator target{1, 0, 1, 1};
  g.backward(g.hamming_loss(y, target));
  const auto& gw = g.grad(w).data;
  CHECK(gw[1] == -2.0);
  CHECK(gw[2] == 2.0);
  CHECK(gw[0] == 0.0);
  CHECK(gw[3] == 0.0);
}

TEST_CASE("repellent_reg") {
  Graph g;
  const Var x = g.leaf(Tensor::zeros({5, 3}));
  CHECK(g.scalar(g.repellent_reg(x, 2.0)) == 2.0);

  Graph far;
  CHECK(far.scalar(far.repellent_reg(far.leaf(Tensor::matrix(2, 3, {0, 0, 0, 100, 0, 0})), 2.0)) <
        1e-40);

  std::mt19937_64 rng(6);
  const Op op = [](Graph& gr, const std::vector<Var>& v) { return gr.repellent_reg(v[0], 2.0); };
  CHECK(max_rel_error(op, {random_tensor({5, 3}, rng)}, rng) <= 1e-6);
  CHECK(repellent_strength(5) == 2.0);
  CHECK(repellent_strength(10) == 3.0);
  CHECK(repellent_strength(20) == 6.0);
  CHECK(repellent_strength(40) == 20.0);
}

TEST_CASE("full pipeline gradients match finite differences away from the solver") {
  std::mt19937_64 rng(7);
  const Op op = [](Graph& gr, const std::vector<Var>& v) {
    const Var h = gr.relu(gr.affine(v[0], v[1], v[2]));
    return gr.pairwise_dist(gr.sphere_project(gr.affine(h, v[3], v[4])));
  };
  Tensor w1 = random_tensor({4, 6}, rng);
  Tensor b1 = random_tensor({4}, rng, 0.5, 1.0);
  CHECK(max_rel_error(op, {random_tensor({5, 6}, rng, 0.0, 1.0), w1, b1,
                           random_tensor({3, 4}, rng), random_tensor({3}, rng)},
                      rng) <= 1e-6);
}

TEST_CASE("adam") {
  Tensor p = Tensor::vector({1.0, -2.0});
  std::vector<Tensor*> ps{&p};
  Adam zero({0.1, 0.9, 0.999, 1e-8, {}}, ps);
  zero.step(ps, {Tensor::vector({0.0, 0.0})}, 1);
  CHECK(p.data == std::vector<double>{1.0, -2.0});

  Tensor s = Tensor::vector({0.0});
  std::vector<Tensor*> ss{&s};
  Adam one({0.1, 0.9, 0.999, 1e-8, {}}, ss);
  one.step(ss, {Tensor::vector({1.0})}, 1);
  CHECK(s.data[0] == doctest::Approx(-0.1).epsilon(1e-6));

  const auto sp = preset(Family::kShortestPath, 6);
  Adam sched(sp.adam, ss);
  CHECK(sched.lr_at(1) == 5e-3);
  CHECK(sched.lr_at(29) == 5e-3);
  CHECK(sched.lr_at(30) == doctest::Approx(5e-4));
  CHECK(sched.lr_at(40) == doctest::Approx(5e-5));

  CHECK_THROWS_AS(Adam({0.0, 0.9, 0.999, 1e-8, {}}, ss), ConfigError);
}

TEST_CASE("presets") {
  const auto sp = preset(Family::kShortestPath, 6);
  CHECK(sp.lambda == 20.0);
  CHECK(sp.batch == 70);
  CHECK(sp.epochs == 50);
  CHECK(sp.adam.lr_drops == std::vector<int>{30, 40});

  const auto pm = preset(Family::kMatching, 4);
  CHECK(pm.lambda == 10.0);
  CHECK(pm.adam.lr == 1e-3);
  CHECK(pm.adam.lr_drops == std::vector<int>{10, 20});

  const auto tsp = preset(Family::kTsp, 5);
  CHECK(tsp.lambda == 20.0);
  CHECK(tsp.adam.lr == 3e-2);
  CHECK(tsp.adam.beta1 == 0.5);
  CHECK(tsp.adam.eps == 1e-3);
  CHECK(tsp.batch == 50);
  CHECK(tsp.epochs == 100);
  CHECK(tsp.repellent.c == 2.0);
  CHECK(tsp.repellent.active(15));
  CHECK(tsp.repellent.active(30));
  CHECK_FALSE(tsp.repellent.active(31));
}

TEST_CASE("config validation and json") {
  nlohmann::json j = {{"family", "sp"}, {"k", 6}, {"lambda", 0.0}};
  CHECK_THROWS_AS(train_config_from_json(j), ConfigError);
  j["lambda"] = 70.0;  // lambda / batch = 1 > default floor
  CHECK_THROWS_AS(train_config_from_json(j), ConfigError);
  j["lambda"] = 10.0;
  j["seed"] = 42;
  j["betas"] = {0.8, 0.99};
  const TrainConfig c = train_config_from_json(j);
  CHECK(c.seed == 42);
  CHECK(c.adam.beta1 == 0.8);
  CHECK(c.epochs == 50);

  nlohmann::json round = c;
  const TrainConfig back = train_config_from_json(round);
  CHECK(back.lambda == c.lambda);
  CHECK(back.adam.lr_drops == c.adam.lr_drops);
  CHECK(back.hidden == c.hidden);

  CHECK_THROWS_AS(train_config_from_json({{"family", "sp"}, {"k", 6}, {"betas", {1.0}}}),
                  ConfigError);
  CHECK_THROWS_AS(train_config_from_json({{"k", 6}}), ConfigError);
}

namespace {

// Identity feature map; the cheap path runs down the left column and along the bottom.
Split single_sp_example() {
  const solvers::GridGraph grid{4, 8};
  const std::vector<double> hidden{1, 9, 9, 9, 1, 9, 9, 9, 1, 9, 9, 9, 1, 1, 1, 1};
  Tensor features = Tensor::zeros({16, 16});
  for (std::size_t i = 0; i < 16; ++i) features.at(i, i) = 1.0;
  return {{{features, solvers::dijkstra_grid(grid, hidden).indicator}}, {}};
}

TrainConfig overfit_config() {
  TrainConfig c = preset(Family::kShortestPath, 4);
  c.lambda = 1.0;
  c.batch = 1;
  c.cost_floor = 1.5;
  c.hidden = {16};
  c.adam = {0.05, 0.9, 0.999, 1e-8, {}};
  c.epochs = 50;
  c.seed = 3;
  return c;
}

}  // namespace

TEST_CASE("training overfits a single example") {
  const Split data = single_sp_example();
  const TrainResult r = train(overfit_config(), data, data);
  REQUIRE(r.history.size() == 50);
  CHECK(r.history.back().train_acc == 1.0);
  CHECK(r.history.back().train_loss == 0.0);
  CHECK(r.history.front().epoch == 1);
}

TEST_CASE("training is deterministic for a fixed seed") {
  const Split data = single_sp_example();
  TrainConfig c = overfit_config();
  c.epochs = 10;
  std::ostringstream a_log;
  std::ostringstream b_log;
  const TrainResult a = train(c, data, data, jsonl_sink(a_log));
  c.threads = 1;
  const TrainResult b = train(c, data, data, jsonl_sink(b_log));
  CHECK(a.history == b.history);
  CHECK(a.model.parameters() == b.model.parameters());
  CHECK(a_log.str() == b_log.str());
  CHECK(a_log.str().find("\"test_acc\"") != std::string::npos);
}

TEST_CASE("training rejects bad configs and diverging runs") {
  const Split data = single_sp_example();
  TrainConfig c = overfit_config();
  c.lambda = 0.0;
  CHECK_THROWS_AS(train(c, data, data), ConfigError);

  c = overfit_config();
  CHECK_THROWS_AS(train(c, Split{}, data), ConfigError);

  // A huge step throws the costs far negative, then into non-finite values.
  c.adam.lr = 1e308;
  c.epochs = 3;
  CHECK_THROWS_AS(train(c, data, data), DivergenceError);
}

TEST_CASE("model serialization round trip") {
  std::mt19937_64 rng(9);
  const TrainConfig c = preset(Family::kTsp, 5);
  const Model m = Model::create(c, 8, rng);
  const Model back = Model::from_json(c, m.to_json());
  CHECK(back.parameters() == m.parameters());
  const Tensor points = m.embed(random_tensor({7, 8}, rng));
  CHECK(points.shape == std::vector<std::size_t>{7, 3});
}
