#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "combigrad/lab/interpolation.hpp"

namespace combigrad::lab {

inline constexpr std::size_t kMaxLandscapePoints = 512 * 512;

// f_lambda and f(y(w)) on the slice w(i, j) = origin + i/(nu-1) u + j/(nv-1) v.
// Values are stored with i (the u index) varying slowest.
struct LandscapeGrid {
  std::vector<double> origin;
  std::vector<double> axis_u;
  std::vector<double> axis_v;
  std::size_t nu = 0;
  std::size_t nv = 0;
  double lambda = 0.0;
  std::vector<double> values;     // f_lambda
  std::vector<double> piecewise;  // f(y(w))
  // Derivatives of f_lambda along u and v per unit of the slice parameter.
  std::vector<double> slope_u;
  std::vector<double> slope_v;

  std::size_t index(std::size_t i, std::size_t j) const { return i * nv + j; }

  // Share of grid points where f_lambda departs from f(y(w)).
  double w_diff_fraction() const;
};

// Dense evaluation, parallel over grid points. Throws CapacityError above
// kMaxLandscapePoints and InputError for a resolution below 2 in either axis.
LandscapeGrid render_landscape(const Solver& solver, const Linearization& lin,
                               std::span<const double> origin, std::span<const double> axis_u,
                               std::span<const double> axis_v, double lambda, std::size_t nu,
                               std::size_t nv, unsigned threads = 0);

// Continuity check along every row and column of the grid. Passes iff every line passes.
struct GridContinuity {
  bool pass = false;
  std::size_t lines_checked = 0;
  std::size_t failing_lines = 0;
  double max_adjacent_diff = 0.0;
};
GridContinuity check_grid_continuity(const LandscapeGrid& grid);

// CSV with header u_index,v_index,f_lambda,f_piecewise.
void write_csv(const LandscapeGrid& grid, std::ostream& out);

nlohmann::json to_json(const LandscapeGrid& grid);

}  // namespace combigrad::lab
