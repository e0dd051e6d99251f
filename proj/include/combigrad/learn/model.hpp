#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <vector>

#include <json.hpp>

#include "combigrad/learn/config.hpp"
#include "combigrad/learn/graph.hpp"

namespace combigrad::learn {

// Per-item MLP (items are grid vertices or cities, one feature row each)
// followed by a family-specific head that produces solver weights:
//   sp   mlp + cost_floor, one cost per vertex; the last layer is kept
//        nonnegative by project(), so costs never drop below the floor
//   tsp  mlp to R^3, sphere_project, pairwise_dist
//   pm   mlp to one value per vertex, vertex_to_edge_cost
class Model {
 public:
  struct Pipeline {
    Var weights;
    std::optional<Var> embedding;  // sphere points for tsp
  };

  // Glorot-uniform weights, zero biases (positive last bias for sp).
  static Model create(const TrainConfig& config, std::size_t feature_dim, std::mt19937_64& rng);

  // Adds the model to `g` for one example's features [items, feature_dim].
  // params[i] receives the leaf of parameters()[i].
  Pipeline build(Graph& g, const Tensor& features, std::vector<Var>& params) const;

  // Applied after every optimizer step.
  void project();

  // MLP output for each row, projected to the sphere for tsp.
  Tensor embed(const Tensor& features) const;

  std::vector<Tensor>& parameters() { return params_; }
  const std::vector<Tensor>& parameters() const { return params_; }
  std::vector<Tensor*> parameter_pointers();
  std::size_t feature_dim() const { return feature_dim_; }

  nlohmann::json to_json() const;
  static Model from_json(const TrainConfig& config, const nlohmann::json& j);

 private:
  Var mlp(Graph& g, Var x, const std::vector<Var>& params) const;

  solvers::InstanceSpec instance_;
  double cost_floor_ = 0.0;
  std::size_t feature_dim_ = 0;
  std::vector<Tensor> params_;  // W0, b0, W1, b1, ...
};

}  // namespace combigrad::learn
