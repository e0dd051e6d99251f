#include "combigrad/harness/metrics.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "combigrad/error.hpp"

namespace combigrad::harness {

namespace {

constexpr double kCostTolerance = 1e-9;
constexpr double kUnitTolerance = 1e-6;

Eigen::MatrixX3d rows_of(const learn::Tensor& t, const char* name) {
  if (t.rank() != 2 || t.shape[1] != 3 || t.shape[0] < 3) {
    throw InputError(std::string(name) + " must be [k,3] with k >= 3, got " + t.shape_string());
  }
  Eigen::MatrixX3d m(t.shape[0], 3);
  for (std::size_t r = 0; r < t.shape[0]; ++r) {
    for (std::size_t c = 0; c < 3; ++c) m(r, c) = t.at(r, c);
    if (std::abs(m.row(r).norm() - 1.0) > kUnitTolerance) {
      throw InputError(std::string(name) + " row " + std::to_string(r) + " is not unit length");
    }
  }
  return m;
}

}  // namespace

AccuracyCheck accuracy_optimal_cost(const Solver& exact, std::span<const std::uint8_t> prediction,
                                    std::span<const double> true_weights, double optimal_cost) {
  AccuracyCheck r;
  if (prediction.size() != exact.dimension() || !exact.feasible(prediction)) {
    r.infeasible = true;
    return r;
  }
  r.optimal = std::abs(dot(true_weights, prediction) - optimal_cost) <= kCostTolerance;
  return r;
}

ProcrustesResult procrustes_offset(const learn::Tensor& X, const learn::Tensor& Y) {
  const Eigen::MatrixX3d x = rows_of(X, "learned locations");
  const Eigen::MatrixX3d y = rows_of(Y, "true locations");
  if (x.rows() != y.rows()) throw InputError("location sets differ in size");

  const Eigen::Matrix3d m = y.transpose() * x;
  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Matrix3d rot = svd.matrixU() * svd.matrixV().transpose();

  ProcrustesResult out;
  const auto sv = svd.singularValues();
  out.degenerate = !(sv(1) > 1e-9 * std::max(sv(0), 1e-300));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out.rotation[i][j] = rot(i, j);
  }
  double total = 0.0;
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const Eigen::Vector3d a = rot * x.row(r).transpose();
    const Eigen::Vector3d b = y.row(r).transpose();
    total += std::atan2(a.cross(b).norm(), a.dot(b));
  }
  out.mean_offset = total / static_cast<double>(x.rows());
  out.mean_offset_km = out.mean_offset * kEarthRadiusKm;
  return out;
}

}  // namespace combigrad::harness
