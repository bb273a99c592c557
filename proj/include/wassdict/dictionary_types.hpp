#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "wassdict/diagram.hpp"

namespace wassdict {

/// Tolerance on the sum of a weight vector.
inline constexpr double kSimplexTolerance = 1e-12;

/// True if every entry is >= 0 and the entries sum to 1 within tolerance.
bool in_simplex(std::span<const double> values, double tolerance = kSimplexTolerance);

/// Barycentric weights: an element of the probability simplex.
class WeightVector {
 public:
  /// Throws std::invalid_argument unless `values` is a non-empty element of
  /// the simplex.
  explicit WeightVector(std::vector<double> values);

  static WeightVector uniform(std::size_t m);
  static WeightVector one_hot(std::size_t m, std::size_t index);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }

  friend bool operator==(const WeightVector&, const WeightVector&) = default;

 private:
  std::vector<double> values_;
};

inline constexpr std::size_t kUnboundedSizeCap = std::numeric_limits<std::size_t>::max();

/// The atoms a_1..a_m and the cap S_m on their total off-diagonal size.
struct Dictionary {
  std::vector<PersistenceDiagram> atoms;
  std::size_t size_cap = kUnboundedSizeCap;

  std::size_t atom_count() const { return atoms.size(); }
  /// Sum of |a_i|.
  std::size_t total_size() const;
};

}  // namespace wassdict
