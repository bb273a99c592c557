#pragma once

// Seeded synthetic diagrams and ensembles for tests.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "wassdict/diagram.hpp"
#include "wassdict/dictionary_types.hpp"

namespace wassdict::testing {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);

/// `count` points of one type, births in [lo, hi), persistence at least
/// `min_persistence` of the range, all inside [lo, hi].
std::vector<Point> random_points(Rng& rng, std::size_t count, double lo = 0.0, double hi = 1.0,
                                 double min_persistence = 0.02);

/// Diagram over [0, 1] with points spread over the three pair types.
PersistenceDiagram random_diagram(Rng& rng, std::size_t count, std::string label = {});

/// Random element of the simplex (possibly sparse).
WeightVector random_weights(Rng& rng, std::size_t m);

struct LabeledEnsemble {
  std::vector<PersistenceDiagram> members;
  std::vector<std::string> classes;
  std::vector<PersistenceDiagram> templates;
};

/// `copies` exact copies of each of `templates` random diagrams of at most
/// `max_points` points, interleaved (member n copies template n % count).
LabeledEnsemble template_copies(std::uint64_t seed, std::size_t templates, std::size_t copies,
                                std::size_t max_points);

/// Three well separated cluster templates; every member jitters its
/// template and adds near-diagonal noise points amounting to
/// `noise_fraction` of its size.
LabeledEnsemble three_clusters(std::uint64_t seed, std::size_t per_cluster,
                               double noise_fraction = 0.2, std::size_t template_points = 10);

}  // namespace wassdict::testing
