#include "combigrad/solver.hpp"

#include <cmath>
#include <string>

#include "combigrad/error.hpp"

namespace combigrad {

double dot(std::span<const double> w, std::span<const std::uint8_t> indicator) {
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (indicator[i] != 0) total += w[i];
  }
  return total;
}

void require_finite(std::span<const double> values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw InputError(std::string(what) + ": non-finite entry at index " + std::to_string(i));
    }
  }
}

void require_length(std::size_t actual, std::size_t expected, const char* what) {
  if (actual != expected) {
    throw InstanceError(std::string(what) + ": expected length " + std::to_string(expected) +
                        ", got " + std::to_string(actual));
  }
}

}  // namespace combigrad
