#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "synthetic.hpp"
#include "wassdict/error.hpp"
#include "wassdict/transport.hpp"

using namespace wassdict;
using namespace wassdict::testing;

namespace {

SquareMatrix random_costs(Rng& rng, std::size_t n) {
  SquareMatrix c(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < n; ++k) c(r, k) = uniform(rng, 0.0, 1.0);
  return c;
}

PersistenceDiagram single_type(std::vector<Point> pts) {
  std::vector<PersistencePair> pairs;
  for (Point p : pts) pairs.emplace_back(p.birth, p.death, PairType::MinSaddle);
  return PersistenceDiagram(std::move(pairs), -10, 10);
}

}  // namespace

TEST_CASE("pair cost") {
  const auto d1 = PersistencePair::on_diagonal_at(2, PairType::MinSaddle);
  const auto d2 = PersistencePair::on_diagonal_at(5, PairType::MinSaddle);
  CHECK(cost(d1, d2) == 0.0);
  const PersistencePair x(0, 2, PairType::MinSaddle);
  CHECK(cost(x, x) == 0.0);
  CHECK(cost(PersistencePair(1, 3, PairType::MinSaddle), d1) == doctest::Approx(2.0));
}

TEST_CASE("exact solver matches enumeration") {
  SquareMatrix hand(3);
  const double v[3][3] = {{4, 1, 3}, {2, 0, 5}, {3, 2, 2}};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) hand(r, c) = v[r][c];
  CHECK(solve_exact(hand).total_cost == doctest::Approx(brute_force_assignment(hand)));
  CHECK(solve_exact(hand).total_cost == 5.0);

  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const SquareMatrix c = random_costs(rng, n);
    const Assignment a = solve_exact(c);
    CHECK(a.total_cost == doctest::Approx(brute_force_assignment(c)).epsilon(1e-12));
    CHECK(mapping_cost(c, a.mapping) == doctest::Approx(a.total_cost));
  }
  CHECK(solve_exact(SquareMatrix(0)).total_cost == 0.0);
}

TEST_CASE("auction converges to the exact cost") {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const SquareMatrix c = random_costs(rng, n);
    PriceVector prices;
    const Assignment a = solve_auction(c, prices, 1e-12);
    CHECK(std::abs(a.total_cost - solve_exact(c).total_cost) < 1e-9);
  }
}

TEST_CASE("auction rejects bad input") {
  SquareMatrix c(2, 1.0);
  PriceVector prices;
  CHECK_THROWS_AS(solve_auction(c, prices, 0.0), std::invalid_argument);
  c(0, 1) = std::nan("");
  CHECK_THROWS_AS(solve_auction(c, prices, 1e-6), NumericalError);
}

TEST_CASE("auction price memorization saves bids") {
  Rng rng(13);
  std::vector<Point> a = random_points(rng, 40), b = random_points(rng, 40);
  auto costs_for = [](const std::vector<Point>& x, const std::vector<Point>& y) {
    const auto rows = augmented_slots(x, y);
    const auto cols = augmented_slots(y, x);
    return cost_matrix(rows, cols, DiagonalCost::AtPosition);
  };
  PriceVector warm;
  solve_auction(costs_for(a, b), warm, 1e-9);
  a[0].death += 1e-6;
  const SquareMatrix perturbed = costs_for(a, b);
  PriceVector cold;
  const Assignment cold_run = solve_auction(perturbed, cold, 1e-9);
  const Assignment warm_run = solve_auction(perturbed, warm, 1e-9);
  CHECK(warm_run.rounds < cold_run.rounds);
  CHECK(warm_run.total_cost == doctest::Approx(cold_run.total_cost).epsilon(1e-6));
}

TEST_CASE("assignment on augmented diagrams") {
  const auto x = single_type({{0, 2}, {1, 5}});
  auto [xa, xb] = augment_pairwise(x, x);
  CHECK(exact_assignment(xa, xb).total_cost == 0.0);

  auto [a, b] = augment_pairwise(single_type({{1, 3}}), single_type({}));
  const Assignment forced = exact_assignment(a, b);
  CHECK(forced.mapping == std::vector<std::size_t>{0});
  CHECK(forced.total_cost == doctest::Approx(2.0));

  PriceVector prices;
  CHECK(auction_assignment(xa, xb, prices, 1e-6).total_cost == 0.0);
  CHECK_THROWS_AS(exact_assignment(x, single_type({})), std::invalid_argument);
}

TEST_CASE("wasserstein distance") {
  Rng rng(14);
  SUBCASE("identity and a forced match") {
    const auto x = random_diagram(rng, 7);
    CHECK(wasserstein_distance(x, x) == 0.0);
    const double p = 0.8;
    CHECK(wasserstein_distance(single_type({{0.1, 0.1 + p}}), single_type({})) ==
          doctest::Approx(p / std::sqrt(2.0)));
  }
  SUBCASE("matches enumeration") {
    for (int trial = 0; trial < 30; ++trial) {
      const auto a = random_points(rng, 1 + trial % 4);
      const auto b = random_points(rng, trial % 4);
      CHECK(squared_wasserstein(a, b) ==
            doctest::Approx(brute_force_squared_wasserstein(a, b)).epsilon(1e-12));
    }
  }
  SUBCASE("types are matched separately") {
    const PersistenceDiagram a({{0.0, 1.0, PairType::MinSaddle}}, 0, 1);
    const PersistenceDiagram b({{0.0, 1.0, PairType::SaddleMax}}, 0, 1);
    CHECK(wasserstein_distance(a, b) == doctest::Approx(1.0));
  }
}

TEST_CASE("distance matrix") {
  Rng rng(15);
  std::vector<PersistenceDiagram> one{random_diagram(rng, 5)};
  CHECK(distance_matrix(one).size() == 1);
  CHECK(distance_matrix(one)(0, 0) == 0.0);

  std::vector<PersistenceDiagram> xs{random_diagram(rng, 5), random_diagram(rng, 6),
                                     random_diagram(rng, 4)};
  xs.push_back(xs[1]);
  const SquareMatrix d = distance_matrix(xs, Parallelism{3});
  for (std::size_t c = 0; c < 4; ++c) CHECK(d(1, c) == d(3, c));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(d(i, j) == d(j, i));
      for (std::size_t k = 0; k < 4; ++k) CHECK(d(i, k) <= d(i, j) + d(j, k) + 1e-9);
    }
  const SquareMatrix serial = distance_matrix(xs);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(serial(i, j) == d(i, j));
}
