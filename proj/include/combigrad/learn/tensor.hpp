#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace combigrad::learn {

// Dense row-major array of doubles.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  Tensor() = default;
  Tensor(std::vector<std::size_t> shape_, std::vector<double> data_);

  static Tensor zeros(std::vector<std::size_t> shape);
  static Tensor vector(std::vector<double> values);
  static Tensor matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t size() const { return data.size(); }
  std::size_t rank() const { return shape.size(); }
  std::size_t rows() const { return shape.empty() ? 0 : shape[0]; }
  // Product of all but the first dimension.
  std::size_t cols() const;

  double& at(std::size_t r, std::size_t c) { return data[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols() + c]; }

  bool finite() const;
  std::string shape_string() const;

  friend bool operator==(const Tensor&, const Tensor&) = default;
};

std::size_t element_count(const std::vector<std::size_t>& shape);

}  // namespace combigrad::learn
