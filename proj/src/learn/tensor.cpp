#include "combigrad/learn/tensor.hpp"

#include <cmath>
#include <functional>
#include <numeric>

#include "combigrad/error.hpp"

namespace combigrad::learn {

std::size_t element_count(const std::vector<std::size_t>& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

Tensor::Tensor(std::vector<std::size_t> shape_, std::vector<double> data_)
    : shape(std::move(shape_)), data(std::move(data_)) {
  if (element_count(shape) != data.size()) {
    throw InputError("tensor data has " + std::to_string(data.size()) +
                     " entries, shape " + shape_string() + " needs " +
                     std::to_string(element_count(shape)));
  }
}

Tensor Tensor::zeros(std::vector<std::size_t> shape) {
  const std::size_t n = element_count(shape);
  return Tensor(std::move(shape), std::vector<double>(n, 0.0));
}

Tensor Tensor::vector(std::vector<double> values) {
  const std::size_t n = values.size();
  return Tensor({n}, std::move(values));
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols, std::vector<double> values) {
  return Tensor({rows, cols}, std::move(values));
}

std::size_t Tensor::cols() const {
  if (shape.empty()) return 0;
  std::size_t c = 1;
  for (std::size_t i = 1; i < shape.size(); ++i) c *= shape[i];
  return c;
}

bool Tensor::finite() const {
  for (double x : data) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

std::string Tensor::shape_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

}  // namespace combigrad::learn
