#include "combigrad/lab/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "combigrad/error.hpp"
#include "combigrad/parallel.hpp"

namespace combigrad::lab {

double LandscapeGrid::w_diff_fraction() const {
  if (values.empty()) return 0.0;
  std::size_t differ = 0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (std::abs(values[k] - piecewise[k]) > kEqualityTolerance) ++differ;
  }
  return static_cast<double>(differ) / static_cast<double>(values.size());
}

LandscapeGrid render_landscape(const Solver& solver, const Linearization& lin,
                               std::span<const double> origin, std::span<const double> axis_u,
                               std::span<const double> axis_v, double lambda, std::size_t nu,
                               std::size_t nv, unsigned threads) {
  const std::size_t n = solver.dimension();
  require_length(origin.size(), n, "slice origin");
  require_length(axis_u.size(), n, "slice axis u");
  require_length(axis_v.size(), n, "slice axis v");
  if (nu < 2 || nv < 2) throw InputError("landscape resolution must be at least 2 per axis");
  if (nu > kMaxLandscapePoints / nv) {
    throw CapacityError("landscape resolution exceeds 512 x 512 points");
  }

  LandscapeGrid g;
  g.origin.assign(origin.begin(), origin.end());
  g.axis_u.assign(axis_u.begin(), axis_u.end());
  g.axis_v.assign(axis_v.begin(), axis_v.end());
  g.nu = nu;
  g.nv = nv;
  g.lambda = lambda;
  g.values.resize(nu * nv);
  g.piecewise.resize(nu * nv);
  g.slope_u.resize(nu * nv);
  g.slope_v.resize(nu * nv);

  parallel_for(nu * nv, threads, [&](std::size_t k) {
    const double s = static_cast<double>(k / nv) / static_cast<double>(nu - 1);
    const double t = static_cast<double>(k % nv) / static_cast<double>(nv - 1);
    std::vector<double> w(n);
    for (std::size_t d = 0; d < n; ++d) w[d] = origin[d] + s * axis_u[d] + t * axis_v[d];
    const InterpolationPoint p = evaluate(solver, lin, w, lambda);
    const std::vector<double> grad = f_lambda_gradient(p, lambda);
    double du = 0.0;
    double dv = 0.0;
    for (std::size_t d = 0; d < n; ++d) {
      du += grad[d] * axis_u[d];
      dv += grad[d] * axis_v[d];
    }
    g.values[k] = p.f_lambda;
    g.piecewise[k] = p.f_y;
    g.slope_u[k] = du;
    g.slope_v[k] = dv;
  });

  for (double x : g.values) {
    if (!std::isfinite(x)) throw NumericError("non-finite landscape value");
  }
  return g;
}

GridContinuity check_grid_continuity(const LandscapeGrid& grid) {
  GridContinuity out;
  std::vector<double> values;
  std::vector<double> slopes;
  // A narrow affine piece can fall between two samples of one line, so each
  // direction uses the steepest slope seen anywhere on the grid.
  double max_u = 0.0;
  double max_v = 0.0;
  for (std::size_t k = 0; k < grid.values.size(); ++k) {
    max_u = std::max(max_u, std::abs(grid.slope_u[k]));
    max_v = std::max(max_v, std::abs(grid.slope_v[k]));
  }
  auto check_line = [&](double step, double floor) {
    const ContinuityReport r = continuity_from_samples(values, slopes, step, floor);
    ++out.lines_checked;
    if (!r.pass) ++out.failing_lines;
    out.max_adjacent_diff = std::max(out.max_adjacent_diff, r.max_adjacent_diff);
  };

  for (std::size_t i = 0; i < grid.nu; ++i) {
    values.clear();
    slopes.clear();
    for (std::size_t j = 0; j < grid.nv; ++j) {
      values.push_back(grid.values[grid.index(i, j)]);
      slopes.push_back(grid.slope_v[grid.index(i, j)]);
    }
    check_line(1.0 / static_cast<double>(grid.nv - 1), max_v);
  }
  for (std::size_t j = 0; j < grid.nv; ++j) {
    values.clear();
    slopes.clear();
    for (std::size_t i = 0; i < grid.nu; ++i) {
      values.push_back(grid.values[grid.index(i, j)]);
      slopes.push_back(grid.slope_u[grid.index(i, j)]);
    }
    check_line(1.0 / static_cast<double>(grid.nu - 1), max_u);
  }
  out.pass = out.failing_lines == 0;
  return out;
}

void write_csv(const LandscapeGrid& grid, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << "u_index,v_index,f_lambda,f_piecewise\n";
  for (std::size_t i = 0; i < grid.nu; ++i) {
    for (std::size_t j = 0; j < grid.nv; ++j) {
      const std::size_t k = grid.index(i, j);
      out << i << ',' << j << ',' << grid.values[k] << ',' << grid.piecewise[k] << '\n';
    }
  }
  out.precision(old_precision);
}

nlohmann::json to_json(const LandscapeGrid& grid) {
  return {
      {"origin", grid.origin},
      {"axis_u", grid.axis_u},
      {"axis_v", grid.axis_v},
      {"resolution", {grid.nu, grid.nv}},
      {"lambda", grid.lambda},
      {"w_diff_fraction", grid.w_diff_fraction()},
      {"f_lambda", grid.values},
      {"f_piecewise", grid.piecewise},
  };
}

}  // namespace combigrad::lab
