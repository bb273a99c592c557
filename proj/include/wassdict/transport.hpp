#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wassdict/diagram.hpp"
#include "wassdict/parallel.hpp"

namespace wassdict {

/// Matching cost: 0 when both points are diagonal, squared Euclidean
/// distance in the birth/death plane otherwise.
double cost(const PersistencePair& x, const PersistencePair& y);

/// A point of an augmented set: a position plus a diagonal flag.
struct Slot {
  Point point;
  bool diagonal = false;
};

/// How a diagonal slot is priced against an off-diagonal point.
enum class DiagonalCost {
  /// Squared distance to the slot's stored position (the plain cost rule).
  AtPosition,
  /// Squared distance to the point's own diagonal projection. Diagonal slots
  /// become interchangeable placeholders for "deleted feature".
  Projected,
};

double slot_cost(const Slot& a, const Slot& b, DiagonalCost rule);

/// Dense row-major K x K matrix.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  std::size_t size() const { return n_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * n_, n_}; }
  double max_entry() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

SquareMatrix cost_matrix(std::span<const Slot> rows, std::span<const Slot> cols, DiagonalCost rule);

/// A bijection row -> column with its cost.
struct Assignment {
  std::vector<std::size_t> mapping;
  double total_cost = 0.0;
  /// Auction accuracy at termination; 0 for the exact solver.
  double epsilon = 0.0;
  /// Number of bids placed (auction only).
  std::size_t rounds = 0;
};

/// Auction dual prices, one per column. Reusing a vector across calls on
/// nearby instances resumes the auction instead of restarting it.
struct PriceVector {
  std::vector<double> prices;

  bool empty() const { return prices.empty(); }
};

/// Instances up to this size go to the exact solver by default.
inline constexpr std::size_t kExactSolverMaxSize = 32;

/// Exact minimum-cost assignment (shortest augmenting path Hungarian
/// method, O(K^3)).
Assignment solve_exact(const SquareMatrix& costs);

/// Gauss-Seidel forward auction with epsilon scaling.
///
/// With empty `prices` the solve starts from zero prices at
/// epsilon = max cost / 4 and divides by 5 per scale down to
/// `target_epsilon`. With prices of the right size the solve resumes at
/// `target_epsilon` directly. Prices are updated in place. The result is
/// within K * epsilon of the optimal cost. Throws NumericalError on
/// non-finite costs, std::invalid_argument if target_epsilon <= 0.
Assignment solve_auction(const SquareMatrix& costs, PriceVector& prices, double target_epsilon);

/// Exact solver for K <= kExactSolverMaxSize, auction otherwise.
Assignment solve_assignment(const SquareMatrix& costs, PriceVector& prices, double target_epsilon);

/// Sum of costs under `mapping`.
double mapping_cost(const SquareMatrix& costs, std::span<const std::size_t> mapping);

/// Slots of a pairwise augmentation: own points, then projections of the
/// other side's points.
std::vector<Slot> augmented_slots(std::span<const Point> own, std::span<const Point> other);

/// Exact assignment between two already-augmented, single-type, equal-size
/// diagrams. Throws std::invalid_argument on a size mismatch.
Assignment exact_assignment(const PersistenceDiagram& x1, const PersistenceDiagram& x2);

/// Auction assignment between two already-augmented, single-type diagrams.
Assignment auction_assignment(const PersistenceDiagram& x1, const PersistenceDiagram& x2,
                              PriceVector& prices, double target_epsilon);

/// Optimal squared L2-Wasserstein cost between two single-type point sets.
double squared_wasserstein(std::span<const Point> a, std::span<const Point> b);

/// Squared L2-Wasserstein distance; per-type costs are summed.
double squared_wasserstein(const TypedPoints& a, const TypedPoints& b);

/// L2-Wasserstein distance between two diagrams. Pairs are matched only
/// within their type; the squared per-type costs are summed before the
/// square root. Diagonal points of the inputs are ignored.
double wasserstein_distance(const PersistenceDiagram& x1, const PersistenceDiagram& x2);

/// Symmetric N x N matrix of pairwise Wasserstein distances with a zero
/// diagonal. Rows are computed concurrently.
SquareMatrix distance_matrix(std::span<const PersistenceDiagram> ensemble,
                             Parallelism par = Parallelism::serial());

}  // namespace wassdict
