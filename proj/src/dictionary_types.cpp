#include "wassdict/dictionary_types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wassdict {

bool in_simplex(std::span<const double> values, double tolerance) {
  if (values.empty()) return false;
  double sum = 0.0;
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tolerance;
}

WeightVector::WeightVector(std::vector<double> values) : values_(std::move(values)) {
  if (!in_simplex(values_))
    throw std::invalid_argument("weight vector of size " + std::to_string(values_.size()) +
                                " is not in the probability simplex");
}

WeightVector WeightVector::uniform(std::size_t m) {
  if (m == 0) throw std::invalid_argument("weight vector needs m >= 1");
  return WeightVector(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

WeightVector WeightVector::one_hot(std::size_t m, std::size_t index) {
  if (index >= m) throw std::invalid_argument("one-hot index out of range");
  std::vector<double> v(m, 0.0);
  v[index] = 1.0;
  return WeightVector(std::move(v));
}

std::size_t Dictionary::total_size() const {
  std::size_t n = 0;
  for (const auto& a : atoms) n += a.off_diagonal_count();
  return n;
}

}  // namespace wassdict
