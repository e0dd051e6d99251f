#include "combigrad/learn/model.hpp"

#include <algorithm>
#include <cmath>

#include "combigrad/error.hpp"

namespace combigrad::learn {

using solvers::Family;

namespace {

std::size_t output_dim(Family family) { return family == Family::kTsp ? 3 : 1; }

}  // namespace

Model Model::create(const TrainConfig& config, std::size_t feature_dim, std::mt19937_64& rng) {
  if (feature_dim == 0) throw ConfigError("feature dimension must be positive");
  if (config.instance.family == Family::kShortestPath && config.hidden.empty()) {
    throw ConfigError("the shortest-path model needs at least one hidden layer");
  }
  Model m;
  m.instance_ = config.instance;
  m.cost_floor_ = config.cost_floor;
  m.feature_dim_ = feature_dim;

  std::vector<std::size_t> dims{feature_dim};
  for (int h : config.hidden) dims.push_back(static_cast<std::size_t>(h));
  dims.push_back(output_dim(config.instance.family));
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const std::size_t in = dims[l];
    const std::size_t out = dims[l + 1];
    const double bound = std::sqrt(6.0 / static_cast<double>(in + out));
    std::uniform_real_distribution<double> u(-bound, bound);
    Tensor w = Tensor::zeros({out, in});
    for (double& x : w.data) x = u(rng);
    m.params_.push_back(std::move(w));
    m.params_.push_back(Tensor::zeros({out}));
  }
  if (config.instance.family == Family::kShortestPath) {
    for (double& w : m.params_[m.params_.size() - 2].data) w = std::abs(w);
    for (double& b : m.params_.back().data) b = 1.0;
  }
  return m;
}

std::vector<Tensor*> Model::parameter_pointers() {
  std::vector<Tensor*> out;
  for (Tensor& t : params_) out.push_back(&t);
  return out;
}

void Model::project() {
  if (instance_.family != Family::kShortestPath) return;
  // Nonnegative output weights over relu features and a nonnegative bias keep
  // every cost at or above the floor.
  for (double& w : params_[params_.size() - 2].data) w = std::max(w, 0.0);
  for (double& b : params_.back().data) b = std::max(b, 0.0);
}

Var Model::mlp(Graph& g, Var x, const std::vector<Var>& params) const {
  const std::size_t layers = params.size() / 2;
  for (std::size_t l = 0; l < layers; ++l) {
    x = g.affine(x, params[2 * l], params[2 * l + 1]);
    if (l + 1 < layers) x = g.relu(x);
  }
  return x;
}

Model::Pipeline Model::build(Graph& g, const Tensor& features, std::vector<Var>& params) const {
  if (features.rank() != 2 || features.shape[1] != feature_dim_) {
    throw InputError("features must be [items, " + std::to_string(feature_dim_) + "], got " +
                     features.shape_string());
  }
  params.clear();
  for (const Tensor& p : params_) params.push_back(g.leaf(p));
  const Var x = g.leaf(features);
  const Var h = mlp(g, x, params);

  switch (instance_.family) {
    case Family::kShortestPath:
      return {g.scale_shift(h, 1.0, cost_floor_), std::nullopt};
    case Family::kTsp: {
      const Var points = g.sphere_project(h);
      return {g.pairwise_dist(points), points};
    }
    case Family::kMatching:
      return {g.vertex_to_edge_cost(h, instance_.k), std::nullopt};
  }
  throw ConfigError("unknown family");
}

Tensor Model::embed(const Tensor& features) const {
  Graph g;
  std::vector<Var> params;
  for (const Tensor& p : params_) params.push_back(g.leaf(p));
  Var h = mlp(g, g.leaf(features), params);
  if (instance_.family == Family::kTsp) h = g.sphere_project(h);
  return g.value(h);
}

nlohmann::json Model::to_json() const {
  nlohmann::json layers = nlohmann::json::array();
  for (const Tensor& t : params_) layers.push_back({{"shape", t.shape}, {"data", t.data}});
  return {{"feature_dim", feature_dim_}, {"parameters", layers}};
}

Model Model::from_json(const TrainConfig& config, const nlohmann::json& j) {
  std::mt19937_64 unused(0);
  Model m = create(config, j.at("feature_dim").get<std::size_t>(), unused);
  const auto& layers = j.at("parameters");
  if (layers.size() != m.params_.size()) throw ConfigError("model has wrong number of layers");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    Tensor t(layers[i].at("shape").get<std::vector<std::size_t>>(),
             layers[i].at("data").get<std::vector<double>>());
    if (t.shape != m.params_[i].shape) throw ConfigError("model layer shape mismatch");
    m.params_[i] = std::move(t);
  }
  return m;
}

}  // namespace combigrad::learn
