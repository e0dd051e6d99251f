#include "combigrad/learn/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "combigrad/error.hpp"
#include "combigrad/parallel.hpp"

namespace combigrad::learn {

namespace {

double hamming(const Indicator& a, const Indicator& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

bool is_accurate(const Split& split, std::size_t i, const Indicator& pred) {
  return split.accurate ? split.accurate(i, pred) : pred == split.examples[i].label;
}

void check_split(const Split& s, std::size_t n, std::size_t feature_dim, const char* name) {
  for (const Example& e : s.examples) {
    if (e.label.size() != n) {
      throw ConfigError(std::string(name) + " label length does not match the instance");
    }
    if (e.features.rank() != 2 || e.features.shape[1] != feature_dim) {
      throw ConfigError(std::string(name) + " features have inconsistent shapes");
    }
  }
}

struct ExampleOutcome {
  std::vector<Tensor> grads;
  double loss = 0.0;
};

}  // namespace

nlohmann::json to_json(const EpochMetrics& m) {
  return {{"epoch", m.epoch},         {"train_loss", m.train_loss}, {"test_loss", m.test_loss},
          {"train_acc", m.train_acc}, {"test_acc", m.test_acc},     {"lr", m.lr}};
}

MetricsSink jsonl_sink(std::ostream& out) {
  return [&out](const EpochMetrics& m) { out << to_json(m).dump() << '\n' << std::flush; };
}

Evaluation evaluate(const Model& model, const Solver& solver, const Split& split,
                    unsigned threads) {
  Evaluation ev;
  const std::size_t n = split.examples.size();
  ev.predictions.resize(n);
  std::vector<char> correct(n, 0);
  parallel_for(n, threads, [&](std::size_t i) {
    Graph g;
    std::vector<Var> params;
    const Model::Pipeline p = model.build(g, split.examples[i].features, params);
    ev.predictions[i] = solver.solve(g.value(p.weights).data).indicator;
    correct[i] = is_accurate(split, i, ev.predictions[i]);
  });
  if (n == 0) return ev;
  for (std::size_t i = 0; i < n; ++i) {
    ev.loss += hamming(ev.predictions[i], split.examples[i].label);
    ev.accuracy += correct[i];
  }
  ev.loss /= static_cast<double>(n);
  ev.accuracy /= static_cast<double>(n);
  return ev;
}

TrainResult train(const TrainConfig& config, const Split& train_split, const Split& test_split,
                  const MetricsSink& sink) {
  config.validate();
  if (train_split.examples.empty()) throw ConfigError("training split is empty");
  const auto solver = solvers::make_solver(config.instance);
  const std::size_t feature_dim = train_split.examples.front().features.shape.at(1);
  check_split(train_split, solver->dimension(), feature_dim, "training");
  check_split(test_split, solver->dimension(), feature_dim, "test");

  std::mt19937_64 rng(config.seed);
  TrainResult result{{}, Model::create(config, feature_dim, rng)};
  Model& model = result.model;
  const std::vector<Tensor*> params = model.parameter_pointers();
  Adam adam(config.adam, params);

  const std::size_t n = train_split.examples.size();
  const std::size_t batch = std::min<std::size_t>(static_cast<std::size_t>(config.batch), n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<ExampleOutcome> outcomes(batch);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    const bool repel = config.repellent.active(epoch);

    // Incomplete trailing batches are dropped.
    for (std::size_t start = 0; start + batch <= n; start += batch) {
      const double weight = 1.0 / static_cast<double>(batch);
      try {
        parallel_for(batch, config.threads, [&](std::size_t b) {
          const Example& ex = train_split.examples[order[start + b]];
          Graph g;
          std::vector<Var> leaves;
          const Model::Pipeline p = model.build(g, ex.features, leaves);
          const Var y = g.blackbox_solve(p.weights, *solver, config.lambda);
          std::vector<Var> roots{g.hamming_loss(y, ex.label, weight)};
          if (repel && p.embedding) {
            roots.push_back(g.repellent_reg(*p.embedding, config.repellent.c * weight));
          }
          g.backward(roots);
          ExampleOutcome& out = outcomes[b];
          out.grads.clear();
          for (Var v : leaves) out.grads.push_back(g.grad(v));
          out.loss = g.scalar(roots.front());
        });
      } catch (const NumericError& e) {
        throw DivergenceError("epoch " + std::to_string(epoch) + ", batch at " +
                              std::to_string(start) + ": " + e.what());
      }

      std::vector<Tensor> grads = outcomes.front().grads;
      double loss = outcomes.front().loss;
      for (std::size_t b = 1; b < batch; ++b) {
        loss += outcomes[b].loss;
        for (std::size_t p = 0; p < grads.size(); ++p) {
          for (std::size_t i = 0; i < grads[p].size(); ++i) {
            grads[p].data[i] += outcomes[b].grads[p].data[i];
          }
        }
      }
      if (!std::isfinite(loss)) {
        throw DivergenceError("non-finite loss at epoch " + std::to_string(epoch) +
                              ", batch at " + std::to_string(start));
      }
      adam.step(params, grads, epoch);
      model.project();
      for (const Tensor* p : params) {
        if (!p->finite()) {
          throw DivergenceError("non-finite parameter after the update at epoch " +
                                std::to_string(epoch) + ", batch at " + std::to_string(start));
        }
      }
    }

    EpochMetrics m;
    m.epoch = epoch;
    m.lr = adam.lr_at(epoch);
    try {
      const Evaluation tr = evaluate(model, *solver, train_split, config.threads);
      const Evaluation te = evaluate(model, *solver, test_split, config.threads);
      m.train_loss = tr.loss;
      m.train_acc = tr.accuracy;
      m.test_loss = te.loss;
      m.test_acc = te.accuracy;
    } catch (const NumericError& e) {
      throw DivergenceError("evaluation after epoch " + std::to_string(epoch) + ": " + e.what());
    }
    result.history.push_back(m);
    if (sink) sink(m);
  }
  return result;
}

}  // namespace combigrad::learn
