#include "wassdict/transport.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "wassdict/error.hpp"

namespace wassdict {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Summation in ascending order so that equal multisets of edge costs give
// bit-identical totals regardless of which side was the row set.
double canonical_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

// Accuracy the distance routines ask of the auction on large instances.
double distance_epsilon(const SquareMatrix& costs) {
  const double scale = std::max(costs.max_entry(), std::numeric_limits<double>::min());
  return scale * 1e-11 / static_cast<double>(std::max<std::size_t>(1, costs.size()));
}

}  // namespace

double cost(const PersistencePair& x, const PersistencePair& y) {
  if (x.on_diagonal() && y.on_diagonal()) return 0.0;
  return squared_norm(x.point() - y.point());
}

double slot_cost(const Slot& a, const Slot& b, DiagonalCost rule) {
  if (a.diagonal && b.diagonal) return 0.0;
  if (rule == DiagonalCost::Projected) {
    if (a.diagonal) return squared_distance_to_diagonal(b.point);
    if (b.diagonal) return squared_distance_to_diagonal(a.point);
  }
  return squared_norm(a.point - b.point);
}

double SquareMatrix::max_entry() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, v);
  return m;
}

SquareMatrix cost_matrix(std::span<const Slot> rows, std::span<const Slot> cols,
                         DiagonalCost rule) {
  if (rows.size() != cols.size())
    throw std::invalid_argument("cost matrix needs equally sized slot sets");
  SquareMatrix c(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) c(i, j) = slot_cost(rows[i], cols[j], rule);
  return c;
}

double mapping_cost(const SquareMatrix& costs, std::span<const std::size_t> mapping) {
  double s = 0.0;
  for (std::size_t i = 0; i < mapping.size(); ++i) s += costs(i, mapping[i]);
  return s;
}

Assignment solve_exact(const SquareMatrix& costs) {
  const std::size_t n = costs.size();
  Assignment result;
  if (n == 0) return result;
  for (std::size_t i = 0; i < n; ++i)
    for (double v : costs.row(i))
      if (!std::isfinite(v)) throw NumericalError("non-finite entry in assignment cost matrix");

  // Potentials u (rows), v (columns); owner[j] is the row matched to column
  // j, all 1-based with index 0 as the virtual source.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> owner(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    owner[0] = i;
    std::size_t j0 = 0;
    std::vector<double> min_slack(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = owner[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = costs(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < min_slack[j]) {
          min_slack[j] = cur;
          way[j] = j0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  result.mapping.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) result.mapping[owner[j] - 1] = j - 1;
  result.total_cost = mapping_cost(costs, result.mapping);
  return result;
}

Assignment solve_auction(const SquareMatrix& costs, PriceVector& prices, double target_epsilon) {
  if (!(target_epsilon > 0.0)) throw std::invalid_argument("auction target epsilon must be > 0");
  const std::size_t n = costs.size();
  Assignment result;
  result.epsilon = target_epsilon;
  if (n == 0) {
    prices.prices.clear();
    return result;
  }
  double max_cost = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (double v : costs.row(i)) {
      if (!std::isfinite(v)) throw NumericalError("non-finite entry in auction cost matrix");
      max_cost = std::max(max_cost, v);
    }

  double epsilon = target_epsilon;
  if (prices.prices.size() != n) {
    prices.prices.assign(n, 0.0);
    epsilon = std::max(max_cost / 4.0, target_epsilon);
  }
  auto& p = prices.prices;

  constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> object_of(n), bidder_of(n);
  for (;;) {
    std::fill(object_of.begin(), object_of.end(), kUnassigned);
    std::fill(bidder_of.begin(), bidder_of.end(), kUnassigned);
    std::deque<std::size_t> queue;
    for (std::size_t i = 0; i < n; ++i) queue.push_back(i);
    while (!queue.empty()) {
      const std::size_t i = queue.front();
      queue.pop_front();
      // Best and second-best net value -cost - price; ties go to the lowest
      // column index.
      double best = -kInf, second = -kInf;
      std::size_t best_j = 0;
      const auto row = costs.row(i);
      for (std::size_t j = 0; j < n; ++j) {
        const double value = -row[j] - p[j];
        if (value > best) {
          second = best;
          best = value;
          best_j = j;
        } else if (value > second) {
          second = value;
        }
      }
      const double increment = (n == 1 ? 0.0 : best - second) + epsilon;
      const double old_price = p[best_j];
      double new_price = old_price + increment;
      if (new_price <= old_price) new_price = std::nextafter(old_price, kInf);
      p[best_j] = new_price;
      const std::size_t evicted = bidder_of[best_j];
      if (evicted != kUnassigned) {
        object_of[evicted] = kUnassigned;
        queue.push_back(evicted);
      }
      bidder_of[best_j] = i;
      object_of[i] = best_j;
      ++result.rounds;
    }
    if (epsilon <= target_epsilon) break;
    epsilon = std::max(epsilon / 5.0, target_epsilon);
  }
  result.mapping = std::move(object_of);
  result.total_cost = mapping_cost(costs, result.mapping);
  result.epsilon = epsilon;
  return result;
}

Assignment solve_assignment(const SquareMatrix& costs, PriceVector& prices,
                            double target_epsilon) {
  if (costs.size() <= kExactSolverMaxSize) return solve_exact(costs);
  return solve_auction(costs, prices, target_epsilon);
}

std::vector<Slot> augmented_slots(std::span<const Point> own, std::span<const Point> other) {
  std::vector<Slot> out;
  out.reserve(own.size() + other.size());
  for (const Point& p : own) out.push_back({p, false});
  for (const Point& p : other) out.push_back({diagonal_projection(p), true});
  return out;
}

namespace {

std::vector<Slot> slots_of(const PersistenceDiagram& x) {
  std::vector<Slot> out;
  out.reserve(x.size());
  for (const auto& p : x.pairs()) out.push_back({p.point(), p.on_diagonal()});
  return out;
}

void check_single_type(const PersistenceDiagram& x1, const PersistenceDiagram& x2) {
  if (x1.size() != x2.size())
    throw std::invalid_argument("assignment needs augmented diagrams of equal size");
  if (x1.empty()) return;
  const PairType t = x1[0].type();
  for (const auto* x : {&x1, &x2})
    for (const auto& p : x->pairs())
      if (p.type() != t) throw std::invalid_argument("assignment needs single-type diagrams");
}

}  // namespace

Assignment exact_assignment(const PersistenceDiagram& x1, const PersistenceDiagram& x2) {
  check_single_type(x1, x2);
  return solve_exact(cost_matrix(slots_of(x1), slots_of(x2), DiagonalCost::AtPosition));
}

Assignment auction_assignment(const PersistenceDiagram& x1, const PersistenceDiagram& x2,
                              PriceVector& prices, double target_epsilon) {
  check_single_type(x1, x2);
  return solve_auction(cost_matrix(slots_of(x1), slots_of(x2), DiagonalCost::AtPosition), prices,
                       target_epsilon);
}

double squared_wasserstein(std::span<const Point> a, std::span<const Point> b) {
  if (a.empty() && b.empty()) return 0.0;
  const auto rows = augmented_slots(a, b);
  const auto cols = augmented_slots(b, a);
  const SquareMatrix costs = cost_matrix(rows, cols, DiagonalCost::AtPosition);
  PriceVector prices;
  const Assignment match = solve_assignment(costs, prices, distance_epsilon(costs));
  std::vector<double> edges(match.mapping.size());
  for (std::size_t i = 0; i < edges.size(); ++i) edges[i] = costs(i, match.mapping[i]);
  return canonical_sum(std::move(edges));
}

double squared_wasserstein(const TypedPoints& a, const TypedPoints& b) {
  double total = 0.0;
  for (PairType t : kPairTypes) total += squared_wasserstein(a[t], b[t]);
  return total;
}

double wasserstein_distance(const PersistenceDiagram& x1, const PersistenceDiagram& x2) {
  return std::sqrt(squared_wasserstein(split_by_type(x1), split_by_type(x2)));
}

SquareMatrix distance_matrix(std::span<const PersistenceDiagram> ensemble, Parallelism par) {
  const std::size_t n = ensemble.size();
  std::vector<TypedPoints> split;
  split.reserve(n);
  for (const auto& x : ensemble) split.push_back(split_by_type(x));
  SquareMatrix d(n);
  parallel_for(n, par, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) d(i, j) = std::sqrt(squared_wasserstein(split[i], split[j]));
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) d(i, j) = d(j, i);
  return d;
}

}  // namespace wassdict
