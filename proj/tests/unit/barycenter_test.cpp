#include <cmath>
#include <limits>

#include "doctest.h"
#include "oracles.hpp"
#include "synthetic.hpp"
#include "wassdict/barycenter.hpp"

using namespace wassdict;
using namespace wassdict::testing;

namespace {

PersistenceDiagram single_type(std::vector<Point> pts) {
  std::vector<PersistencePair> pairs;
  for (Point p : pts) pairs.emplace_back(p.birth, p.death, PairType::MinSaddle);
  return PersistenceDiagram(std::move(pairs), 0, 5);
}

}  // namespace

TEST_CASE("weights live on the simplex") {
  CHECK_THROWS_AS(WeightVector({0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(WeightVector({1.5, -0.5}), std::invalid_argument);
  CHECK_THROWS_AS(WeightVector(std::vector<double>{}), std::invalid_argument);
  CHECK(WeightVector::one_hot(3, 1)[1] == 1.0);
}

TEST_CASE("frechet energy") {
  Rng rng(21);
  const auto a1 = random_diagram(rng, 6), a2 = random_diagram(rng, 5);
  SUBCASE("candidate equal to a one-hot atom") {
    CHECK(frechet_energy(Dictionary{{a1, a2}}, WeightVector::one_hot(2, 0), a1) == 0.0);
  }
  SUBCASE("single atom") {
    const auto b = random_diagram(rng, 4);
    const double w = wasserstein_distance(a1, b);
    CHECK(frechet_energy(Dictionary{{a1}}, WeightVector::uniform(1), b) ==
          doctest::Approx(w * w));
  }
  SUBCASE("two equal atoms") {
    const auto b = random_diagram(rng, 4);
    const double w = wasserstein_distance(a1, b);
    CHECK(frechet_energy(Dictionary{{a1, a1}}, WeightVector::uniform(2), b) ==
          doctest::Approx(w * w));
  }
}

TEST_CASE("barycenter augmentation sizes") {
  const Dictionary d{{single_type({{0, 1}}), single_type({{0, 2}, {1, 3}})}};
  auto [atoms, b] = augment_for_barycenter(d, single_type({{1, 2}}));
  CHECK(atoms.atoms[0].size() == 4);
  CHECK(atoms.atoms[1].size() == 4);
  CHECK(b.size() == 4);

  auto [empty_atoms, empty_b] = augment_for_barycenter(Dictionary{{single_type({})}},
                                                       single_type({}));
  CHECK(empty_atoms.atoms[0].empty());
  CHECK(empty_b.empty());

  auto [one, cand] = augment_for_barycenter(Dictionary{{single_type({{0, 1}, {1, 4}})}},
                                            single_type({}));
  CHECK(one.atoms[0].size() == 2);
  CHECK(cand.size() == 2);
  for (const auto& p : cand.pairs()) CHECK(p.is_diagonal());
}

TEST_CASE("one-hot barycenter reproduces the atom") {
  Rng rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 1 + trial % 4;
    Dictionary d;
    for (std::size_t i = 0; i < m; ++i) d.atoms.push_back(random_diagram(rng, 1 + (trial + i) % 10));
    const std::size_t pick = trial % m;
    const Barycenter y = compute_barycenter(d, WeightVector::one_hot(m, pick));
    CHECK(wasserstein_distance(y.diagram(), d.atoms[pick]) < 1e-6);
    CHECK(y.frechet_energy < 1e-12);
  }
}

TEST_CASE("two equal atoms give that atom") {
  Rng rng(23);
  const auto a = random_diagram(rng, 8);
  const Barycenter y = compute_barycenter(Dictionary{{a, a}}, WeightVector::uniform(2));
  CHECK(wasserstein_distance(y.diagram(), a) < 1e-9);
}

TEST_CASE("two single-point atoms meet at the mean") {
  const Dictionary d{{single_type({{0, 2}}), single_type({{0, 4}})}};
  const Barycenter y = compute_barycenter(d, WeightVector::uniform(2));
  const TypedPoints pts = y.points();
  REQUIRE(pts.total_size() == 1);
  CHECK(pts[PairType::MinSaddle][0].birth == doctest::Approx(0.0));
  CHECK(pts[PairType::MinSaddle][0].death == doctest::Approx(3.0));

  // Grid search over single-point candidates, plus the empty candidate.
  const std::vector<Point> a1{{0, 2}}, a2{{0, 4}};
  double best = 0.5 * brute_force_squared_wasserstein(a1, {}) +
                0.5 * brute_force_squared_wasserstein(a2, {});
  Point arg{-1, -1};
  for (double b = 0; b <= 5.0; b += 0.05)
    for (double dd = b; dd <= 5.0; dd += 0.05) {
      const std::vector<Point> c{{b, dd}};
      const double e = 0.5 * brute_force_squared_wasserstein(a1, c) +
                       0.5 * brute_force_squared_wasserstein(a2, c);
      if (e < best) {
        best = e;
        arg = {b, dd};
      }
    }
  CHECK(arg.birth == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(arg.death == doctest::Approx(3.0));
  CHECK(y.frechet_energy == doctest::Approx(best));
}

TEST_CASE("barycenter energy never increases and beats every atom") {
  Rng rng(24);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 2 + trial % 3;
    Dictionary d;
    for (std::size_t i = 0; i < m; ++i) d.atoms.push_back(random_diagram(rng, 3 + (trial + i) % 8));
    const WeightVector w = random_weights(rng, m);
    const Barycenter y = compute_barycenter(d, w);
    for (std::size_t k = 1; k < y.energy_history.size(); ++k)
      CHECK(y.energy_history[k] <= y.energy_history[k - 1] * (1 + 1e-12) + 1e-15);
    for (const auto& a : d.atoms) CHECK(y.frechet_energy <= frechet_energy(d, w, a) + 1e-12);
    // The stored matchings may only overestimate the optimal energy.
    CHECK(frechet_energy(d, w, y.diagram()) <= y.frechet_energy + 1e-12);
  }
}

TEST_CASE("barycenter rejects mismatched weights") {
  Rng rng(25);
  const Dictionary d{{random_diagram(rng, 3), random_diagram(rng, 3)}};
  CHECK_THROWS_AS(compute_barycenter(d, WeightVector::uniform(3)), std::invalid_argument);
  CHECK_THROWS_AS(compute_barycenter(Dictionary{}, WeightVector::uniform(1)),
                  std::invalid_argument);
}

TEST_CASE("warm start never loses to the cold run") {
  Rng rng(26);
  Dictionary d;
  for (int i = 0; i < 3; ++i) d.atoms.push_back(random_diagram(rng, 8));
  const WeightVector w = random_weights(rng, 3);
  const Barycenter cold = compute_barycenter(d, w);
  const Barycenter warm = compute_barycenter(d, WeightVector::uniform(3), {}, &cold);
  const Barycenter plain = compute_barycenter(d, WeightVector::uniform(3));
  CHECK(warm.frechet_energy <= plain.frechet_energy + 1e-15);
}
