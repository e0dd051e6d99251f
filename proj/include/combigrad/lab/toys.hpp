#pragma once

#include "combigrad/lab/interpolation.hpp"
#include "combigrad/solvers/brute_force.hpp"

namespace combigrad::lab {

// Y = {0, 1} with c(w, y) = w y. y(w) jumps at w = 0.
solvers::EnumeratedSolver toy_1d();

// f(y) = slope * y around base 0; K = |slope|, W_diff = (-lambda * slope, 0) for slope > 0.
Linearization toy_1d_linearization(double slope = 1.0);

// Y = {(0,0), (1,0), (0,1)}: three regions in the plane meeting at the origin.
solvers::EnumeratedSolver toy_three_region();

// Base (0,0), loss 0, gradient (1, 2): the three solutions score 0, 1 and 2.
Linearization toy_three_region_linearization();

}  // namespace combigrad::lab
