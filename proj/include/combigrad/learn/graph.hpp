#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "combigrad/blackbox.hpp"
#include "combigrad/learn/tensor.hpp"
#include "combigrad/solver.hpp"

namespace combigrad::learn {

// Handle to a node of a Graph.
using Var = std::size_t;

// Single-use reverse-mode tape over a fixed set of ops. Build it forward,
// call backward once, then read gradients. Not thread-safe; use one graph per
// example.
class Graph {
 public:
  // Leaf holding a copy of `value`. Gradients are accumulated for every leaf.
  Var leaf(Tensor value);

  // x [n, in], W [out, in], b [out] -> x W^T + b, shape [n, out].
  Var affine(Var x, Var W, Var b);
  Var relu(Var x);
  // a * x + c with constants a, c.
  Var scale_shift(Var x, double a, double c);
  // Rows of x [k, 3] divided by their norms. Throws NumericError naming the
  // row if a norm is below 1e-12.
  Var sphere_project(Var x);
  // x [k, 3] -> distances in the TSP edge layout (upper triangle, row-major).
  Var pairwise_dist(Var x);
  // Vertex values of a k x k grid (any shape with k^2 entries) -> edge costs
  // 10 * first + second in the matching edge layout.
  Var vertex_to_edge_cost(Var v, int k);
  // Solver layer: forward solves once, backward makes one more solve at the
  // perturbed weights. `solver` must outlive the graph.
  Var blackbox_solve(Var w, const Solver& solver, double lambda);
  // weight * sum |y - target|, a scalar. The gradient with respect to y is
  // weight * (+1 where target is 0, -1 where it is 1).
  Var hamming_loss(Var y, std::span<const std::uint8_t> target, double weight = 1.0);
  // c * mean over ordered pairs i != j of exp(-||x_i - x_j||), a scalar.
  Var repellent_reg(Var x, double c);

  const Tensor& value(Var v) const { return nodes_.at(v).value; }
  const Tensor& grad(Var v) const { return nodes_.at(v).grad; }
  double scalar(Var v) const { return nodes_.at(v).value.data.at(0); }
  std::size_t size() const { return nodes_.size(); }

  // Seeds each root (a scalar) with 1 and propagates to every node.
  void backward(std::span<const Var> roots);
  void backward(Var root) { backward(std::span<const Var>(&root, 1)); }
  // Vector-Jacobian product: propagates `seed` (shaped like root) instead of 1.
  void backward(Var root, const Tensor& seed);

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    // Reads this node's grad and adds into its inputs' grads.
    std::function<void(Graph&, const Node&)> back;
  };

  Var push(Tensor value, std::function<void(Graph&, const Node&)> back);
  void propagate();
  Tensor& grad_of(Var v) { return nodes_[v].grad; }

  std::vector<Node> nodes_;
};

}  // namespace combigrad::learn
