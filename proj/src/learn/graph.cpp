#include "combigrad/learn/graph.hpp"

#include <cmath>
#include <string>

#include "combigrad/error.hpp"
#include "combigrad/solvers/matching.hpp"
#include "combigrad/solvers/tsp.hpp"

namespace combigrad::learn {

namespace {

constexpr double kMinRowNorm = 1e-12;

void require(bool ok, const std::string& what) {
  if (!ok) throw InputError(what);
}

void require_finite(const Tensor& t, const char* op) {
  if (!t.finite()) throw NumericError(std::string("non-finite output from ") + op);
}

}  // namespace

Var Graph::push(Tensor value, std::function<void(Graph&, const Node&)> back) {
  nodes_.push_back(Node{std::move(value), Tensor{}, std::move(back)});
  return nodes_.size() - 1;
}

Var Graph::leaf(Tensor value) { return push(std::move(value), nullptr); }

Var Graph::affine(Var x, Var W, Var b) {
  const Tensor& xv = value(x);
  const Tensor& wv = value(W);
  const Tensor& bv = value(b);
  require(xv.rank() == 2 && wv.rank() == 2 && bv.rank() == 1,
          "affine expects x [n,in], W [out,in], b [out]");
  const std::size_t n = xv.shape[0];
  const std::size_t in = xv.shape[1];
  const std::size_t out = wv.shape[0];
  require(wv.shape[1] == in && bv.shape[0] == out,
          "affine shape mismatch: x " + xv.shape_string() + ", W " + wv.shape_string() +
              ", b " + bv.shape_string());

  Tensor y = Tensor::zeros({n, out});
  for (std::size_t r = 0; r < n; ++r) {
    const double* xr = &xv.data[r * in];
    for (std::size_t o = 0; o < out; ++o) {
      const double* wo = &wv.data[o * in];
      double s = bv.data[o];
      for (std::size_t i = 0; i < in; ++i) s += wo[i] * xr[i];
      y.data[r * out + o] = s;
    }
  }
  require_finite(y, "affine");
  return push(std::move(y), [x, W, b, n, in, out](Graph& g, const Node& self) {
    const Tensor& gy = self.grad;
    const Tensor& xv = g.value(x);
    const Tensor& wv = g.value(W);
    Tensor& gx = g.grad_of(x);
    Tensor& gw = g.grad_of(W);
    Tensor& gb = g.grad_of(b);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t o = 0; o < out; ++o) {
        const double d = gy.data[r * out + o];
        if (d == 0.0) continue;
        gb.data[o] += d;
        for (std::size_t i = 0; i < in; ++i) {
          gw.data[o * in + i] += d * xv.data[r * in + i];
          gx.data[r * in + i] += d * wv.data[o * in + i];
        }
      }
    }
  });
}

Var Graph::relu(Var x) {
  Tensor y = value(x);
  for (double& v : y.data) v = v > 0.0 ? v : 0.0;
  return push(std::move(y), [x](Graph& g, const Node& self) {
    const Tensor& xv = g.value(x);
    Tensor& gx = g.grad_of(x);
    for (std::size_t i = 0; i < xv.size(); ++i) {
      if (xv.data[i] > 0.0) gx.data[i] += self.grad.data[i];
    }
  });
}

Var Graph::scale_shift(Var x, double a, double c) {
  Tensor y = value(x);
  for (double& v : y.data) v = a * v + c;
  require_finite(y, "scale_shift");
  return push(std::move(y), [x, a](Graph& g, const Node& self) {
    Tensor& gx = g.grad_of(x);
    for (std::size_t i = 0; i < gx.size(); ++i) gx.data[i] += a * self.grad.data[i];
  });
}

Var Graph::sphere_project(Var x) {
  const Tensor& xv = value(x);
  require(xv.rank() == 2 && xv.shape[1] == 3, "sphere_project expects [k,3], got " + xv.shape_string());
  const std::size_t k = xv.shape[0];
  Tensor y = xv;
  std::vector<double> norms(k);
  for (std::size_t r = 0; r < k; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < 3; ++c) s += xv.data[3 * r + c] * xv.data[3 * r + c];
    norms[r] = std::sqrt(s);
    if (!(norms[r] >= kMinRowNorm)) {
      throw NumericError("sphere_project: row " + std::to_string(r) + " has near-zero norm");
    }
    for (std::size_t c = 0; c < 3; ++c) y.data[3 * r + c] /= norms[r];
  }
  return push(std::move(y), [x, k, norms](Graph& g, const Node& self) {
    // d/dx (x/|x|) = (I - u u^T) / |x|
    Tensor& gx = g.grad_of(x);
    for (std::size_t r = 0; r < k; ++r) {
      const double* u = &self.value.data[3 * r];
      const double* gu = &self.grad.data[3 * r];
      const double radial = u[0] * gu[0] + u[1] * gu[1] + u[2] * gu[2];
      for (std::size_t c = 0; c < 3; ++c) {
        gx.data[3 * r + c] += (gu[c] - radial * u[c]) / norms[r];
      }
    }
  });
}

Var Graph::pairwise_dist(Var x) {
  const Tensor& xv = value(x);
  require(xv.rank() == 2 && xv.shape[1] == 3, "pairwise_dist expects [k,3], got " + xv.shape_string());
  const int k = static_cast<int>(xv.shape[0]);
  const solvers::TspInstance layout{k};
  layout.validate();
  Tensor d = Tensor::zeros({layout.edge_count()});
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      double s = 0.0;
      for (int c = 0; c < 3; ++c) {
        const double diff = xv.data[3 * i + c] - xv.data[3 * j + c];
        s += diff * diff;
      }
      d.data[layout.edge_index(i, j)] = std::sqrt(s);
    }
  }
  return push(std::move(d), [x, layout](Graph& g, const Node& self) {
    const Tensor& xv = g.value(x);
    Tensor& gx = g.grad_of(x);
    for (int i = 0; i < layout.k; ++i) {
      for (int j = i + 1; j < layout.k; ++j) {
        const std::size_t e = layout.edge_index(i, j);
        const double dist = self.value.data[e];
        if (dist == 0.0) continue;  // subgradient 0 at coincident points
        const double scale = self.grad.data[e] / dist;
        for (int c = 0; c < 3; ++c) {
          const double diff = xv.data[3 * i + c] - xv.data[3 * j + c];
          gx.data[3 * i + c] += scale * diff;
          gx.data[3 * j + c] -= scale * diff;
        }
      }
    }
  });
}

Var Graph::vertex_to_edge_cost(Var v, int k) {
  const solvers::MatchingInstance layout{k};
  layout.validate();
  const Tensor& vv = value(v);
  require(vv.size() == layout.vertex_count(),
          "vertex_to_edge_cost expects " + std::to_string(layout.vertex_count()) + " values");
  Tensor c = Tensor::zeros({layout.edge_count()});
  for (std::size_t e = 0; e < layout.edge_count(); ++e) {
    const auto [first, second] = layout.endpoints(e);
    c.data[e] = 10.0 * vv.data[first] + vv.data[second];
  }
  return push(std::move(c), [v, layout](Graph& g, const Node& self) {
    Tensor& gv = g.grad_of(v);
    for (std::size_t e = 0; e < layout.edge_count(); ++e) {
      const auto [first, second] = layout.endpoints(e);
      gv.data[first] += 10.0 * self.grad.data[e];
      gv.data[second] += self.grad.data[e];
    }
  });
}

Var Graph::blackbox_solve(Var w, const Solver& solver, double lambda) {
  auto [y, state] = combigrad::forward(solver, value(w).data, lambda);
  std::vector<double> out(y.indicator.begin(), y.indicator.end());
  return push(Tensor::vector(std::move(out)),
              [w, &solver, state = std::move(state)](Graph& g, const Node& self) {
                const std::vector<double> gw = combigrad::backward(solver, state, self.grad.data);
                Tensor& target = g.grad_of(w);
                for (std::size_t i = 0; i < gw.size(); ++i) target.data[i] += gw[i];
              });
}

Var Graph::hamming_loss(Var y, std::span<const std::uint8_t> target, double weight) {
  const Tensor& yv = value(y);
  require_length(target.size(), yv.size(), "hamming target");
  double loss = 0.0;
  for (std::size_t i = 0; i < yv.size(); ++i) loss += std::abs(yv.data[i] - target[i]);
  std::vector<std::uint8_t> t(target.begin(), target.end());
  return push(Tensor::vector({weight * loss}), [y, weight, t = std::move(t)](Graph& g, const Node& self) {
    Tensor& gy = g.grad_of(y);
    const double s = weight * self.grad.data[0];
    for (std::size_t i = 0; i < t.size(); ++i) gy.data[i] += t[i] ? -s : s;
  });
}

Var Graph::repellent_reg(Var x, double c) {
  const Tensor& xv = value(x);
  require(xv.rank() == 2 && xv.shape[0] >= 2, "repellent_reg expects [k,d] with k >= 2");
  const std::size_t k = xv.shape[0];
  const std::size_t dim = xv.shape[1];
  // Mean over ordered pairs = mean over unordered pairs.
  const double scale = c * 2.0 / static_cast<double>(k * (k - 1));
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      double s = 0.0;
      for (std::size_t d = 0; d < dim; ++d) {
        const double diff = xv.data[dim * i + d] - xv.data[dim * j + d];
        s += diff * diff;
      }
      total += std::exp(-std::sqrt(s));
    }
  }
  return push(Tensor::vector({scale * total}), [x, k, dim, scale](Graph& g, const Node& self) {
    const Tensor& xv = g.value(x);
    Tensor& gx = g.grad_of(x);
    const double seed = scale * self.grad.data[0];
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        double s = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
          const double diff = xv.data[dim * i + d] - xv.data[dim * j + d];
          s += diff * diff;
        }
        const double dist = std::sqrt(s);
        if (dist == 0.0) continue;
        const double coef = -seed * std::exp(-dist) / dist;
        for (std::size_t d = 0; d < dim; ++d) {
          const double diff = xv.data[dim * i + d] - xv.data[dim * j + d];
          gx.data[dim * i + d] += coef * diff;
          gx.data[dim * j + d] -= coef * diff;
        }
      }
    }
  });
}

void Graph::backward(std::span<const Var> roots) {
  for (Node& n : nodes_) n.grad = Tensor::zeros(n.value.shape);
  for (Var r : roots) {
    if (nodes_.at(r).value.size() != 1) throw InputError("backward root must be a scalar");
    nodes_[r].grad.data[0] += 1.0;
  }
  propagate();
}

void Graph::backward(Var root, const Tensor& seed) {
  for (Node& n : nodes_) n.grad = Tensor::zeros(n.value.shape);
  if (seed.size() != nodes_.at(root).value.size()) throw InputError("seed shape mismatch");
  nodes_[root].grad.data = seed.data;
  propagate();
}

void Graph::propagate() {
  for (std::size_t i = nodes_.size(); i-- > 0;) {
    const Node& n = nodes_[i];
    if (n.back) n.back(*this, n);
  }
  for (const Node& n : nodes_) {
    if (!n.grad.finite()) throw NumericError("non-finite gradient during backward");
  }
}

}  // namespace combigrad::learn
