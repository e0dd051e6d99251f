#include "combigrad/learn/config.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "combigrad/error.hpp"

namespace combigrad::learn {

using solvers::Family;

void TrainConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("lambda must be positive; lambda = 0 makes every gradient zero");
  }
  if (epochs < 1) throw ConfigError("epochs must be at least 1");
  if (batch < 1) throw ConfigError("batch must be at least 1");
  if (!(adam.lr > 0.0)) throw ConfigError("lr must be positive");
  for (int h : hidden) {
    if (h < 1) throw ConfigError("hidden layer sizes must be positive");
  }
  if (repellent.c < 0.0) throw ConfigError("repellent strength must be nonnegative");
  if (instance.family == Family::kShortestPath && !(cost_floor > lambda / batch)) {
    throw ConfigError("cost_floor must exceed lambda / batch = " +
                      std::to_string(lambda / batch) +
                      " so perturbed shortest-path costs stay positive");
  }
}

double repellent_strength(int k) {
  const int ks[] = {5, 10, 20, 40};
  const double cs[] = {2.0, 3.0, 6.0, 20.0};
  std::size_t best = 0;
  for (std::size_t i = 1; i < 4; ++i) {
    if (std::abs(ks[i] - k) < std::abs(ks[best] - k)) best = i;
  }
  return cs[best];
}

TrainConfig preset(Family family, int k) {
  TrainConfig c;
  c.instance.family = family;
  c.instance.k = k;
  switch (family) {
    case Family::kShortestPath:
      c.lambda = 20.0;
      c.adam = {5e-3, 0.9, 0.999, 1e-8, {30, 40}};
      c.epochs = 50;
      c.batch = 70;
      break;
    case Family::kMatching:
      c.lambda = 10.0;
      c.adam = {1e-3, 0.9, 0.999, 1e-8, {10, 20}};
      c.epochs = 30;
      c.batch = 70;
      break;
    case Family::kTsp:
      c.lambda = 20.0;
      c.adam = {3e-2, 0.5, 0.999, 1e-3, {80, 90}};
      c.epochs = 100;
      c.batch = 50;
      c.hidden = {};
      c.repellent = {15, 30, repellent_strength(k)};
      break;
  }
  return c;
}

void to_json(nlohmann::json& j, const TrainConfig& c) {
  j = nlohmann::json(c.instance);
  j["lambda"] = c.lambda;
  j["lr"] = c.adam.lr;
  j["betas"] = {c.adam.beta1, c.adam.beta2};
  j["eps"] = c.adam.eps;
  j["schedule"] = c.adam.lr_drops;
  j["epochs"] = c.epochs;
  j["batch"] = c.batch;
  j["seed"] = c.seed;
  j["hidden"] = c.hidden;
  j["cost_floor"] = c.cost_floor;
  j["repellent"] = {{"start", c.repellent.start}, {"end", c.repellent.end}, {"c", c.repellent.c}};
  j["threads"] = c.threads;
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  try {
    const auto instance = j.get<solvers::InstanceSpec>();
    TrainConfig c = preset(instance.family, instance.k);
    c.instance = instance;
    if (j.contains("lambda")) c.lambda = j.at("lambda").get<double>();
    if (j.contains("lr")) c.adam.lr = j.at("lr").get<double>();
    if (j.contains("betas")) {
      const auto& b = j.at("betas");
      if (!b.is_array() || b.size() != 2) throw ConfigError("betas must be a pair");
      c.adam.beta1 = b[0].get<double>();
      c.adam.beta2 = b[1].get<double>();
    }
    if (j.contains("eps")) c.adam.eps = j.at("eps").get<double>();
    if (j.contains("schedule")) c.adam.lr_drops = j.at("schedule").get<std::vector<int>>();
    if (j.contains("epochs")) c.epochs = j.at("epochs").get<int>();
    if (j.contains("batch")) c.batch = j.at("batch").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("hidden")) c.hidden = j.at("hidden").get<std::vector<int>>();
    if (j.contains("cost_floor")) c.cost_floor = j.at("cost_floor").get<double>();
    if (j.contains("repellent")) {
      const auto& r = j.at("repellent");
      c.repellent.start = r.value("start", c.repellent.start);
      c.repellent.end = r.value("end", c.repellent.end);
      c.repellent.c = r.value("c", c.repellent.c);
    }
    if (j.contains("threads")) c.threads = j.at("threads").get<unsigned>();
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad training config: ") + e.what());
  }
}

}  // namespace combigrad::learn
