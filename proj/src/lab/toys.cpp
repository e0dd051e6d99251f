#include "combigrad/lab/toys.hpp"

namespace combigrad::lab {

solvers::EnumeratedSolver toy_1d() { return solvers::EnumeratedSolver({{0}, {1}}, "toy-1d"); }

Linearization toy_1d_linearization(double slope) { return {{0}, 0.0, {slope}}; }

solvers::EnumeratedSolver toy_three_region() {
  return solvers::EnumeratedSolver({{0, 0}, {1, 0}, {0, 1}}, "toy-3-region");
}

Linearization toy_three_region_linearization() { return {{0, 0}, 0.0, {1.0, 2.0}}; }

}  // namespace combigrad::lab
