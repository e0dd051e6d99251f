#pragma once

#include <random>
#include <vector>

#include "combigrad/lab/interpolation.hpp"
#include "combigrad/solvers/registry.hpp"

namespace combigrad::lab {

// Random inputs for the property checks, drawn per family:
//   sp   costs in [1, 10]
//   tsp  costs in [0, 2] (chord lengths on the unit sphere)
//   pm   costs in [-5, 5]
std::vector<double> random_weights(solvers::Family family, std::size_t n, std::mt19937_64& rng);

// Largest |grad| entry used with perturbations up to lambda_max. For sp it
// keeps every perturbed cost w + lambda grad at least 0.1 so Dijkstra applies.
double gradient_scale(solvers::Family family, double lambda_max);

// Base solution solved at fresh random weights, loss in [0, 5],
// gradient entries uniform in [-scale, scale].
Linearization random_linearization(const Solver& solver, solvers::Family family, double scale,
                                   std::mt19937_64& rng);

// Plane origin + s u + t v (s, t in [0, 1]) through weight space. Along u the
// cost of a second solution falls until it overtakes solve(origin) near s = 1/2;
// v is a random axis centered on the plane. For sp every cost on the plane
// stays at least 1, so gradient_scale's positivity guarantee carries over.
struct Slice {
  std::vector<double> origin;
  std::vector<double> u;
  std::vector<double> v;
};

Slice boundary_slice(const Solver& solver, solvers::Family family, std::mt19937_64& rng);

}  // namespace combigrad::lab
