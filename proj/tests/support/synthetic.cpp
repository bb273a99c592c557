#include "synthetic.hpp"

#include <algorithm>
#include <cmath>

namespace wassdict::testing {

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::vector<Point> random_points(Rng& rng, std::size_t count, double lo, double hi,
                                 double min_persistence) {
  const double range = hi - lo;
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double pers = uniform(rng, min_persistence, 0.9) * range;
    const double birth = uniform(rng, lo, hi - pers);
    out.push_back({birth, birth + pers});
  }
  return out;
}

PersistenceDiagram random_diagram(Rng& rng, std::size_t count, std::string label) {
  std::vector<PersistencePair> pairs;
  pairs.reserve(count);
  for (const Point& p : random_points(rng, count)) {
    const auto t = kPairTypes[std::uniform_int_distribution<std::size_t>(0, 2)(rng)];
    pairs.emplace_back(p.birth, p.death, t);
  }
  return PersistenceDiagram(std::move(pairs), 0.0, 1.0, std::move(label));
}

WeightVector random_weights(Rng& rng, std::size_t m) {
  std::vector<double> w(m);
  for (double& x : w) x = std::exponential_distribution<double>(1.0)(rng);
  // One time in four, zero out a random subset to exercise sparse weights.
  if (m > 1 && uniform(rng, 0.0, 1.0) < 0.25)
    for (double& x : w)
      if (uniform(rng, 0.0, 1.0) < 0.5) x = 0.0;
  if (std::all_of(w.begin(), w.end(), [](double x) { return x == 0.0; })) w[0] = 1.0;
  double sum = 0.0;
  for (double x : w) sum += x;
  for (double& x : w) x /= sum;
  return WeightVector(std::move(w));
}

LabeledEnsemble template_copies(std::uint64_t seed, std::size_t templates, std::size_t copies,
                                std::size_t max_points) {
  Rng rng(seed);
  LabeledEnsemble e;
  for (std::size_t t = 0; t < templates; ++t) {
    const std::size_t count = std::uniform_int_distribution<std::size_t>(
        std::max<std::size_t>(1, max_points * 2 / 3), max_points)(rng);
    e.templates.push_back(random_diagram(rng, count, "template_" + std::to_string(t)));
  }
  for (std::size_t n = 0; n < templates * copies; ++n) {
    const std::size_t t = n % templates;
    char label[32];
    std::snprintf(label, sizeof label, "member_%02zu", n);
    e.members.push_back(e.templates[t].with_label(label));
    e.classes.push_back("class_" + std::to_string(t));
  }
  return e;
}

LabeledEnsemble three_clusters(std::uint64_t seed, std::size_t per_cluster,
                               double noise_fraction, std::size_t template_points) {
  Rng rng(seed);
  LabeledEnsemble e;
  for (std::size_t c = 0; c < 3; ++c) {
    std::vector<PersistencePair> pairs;
    // Each cluster owns a band of the plane so the templates stay far apart.
    const double lo = 0.3 * static_cast<double>(c);
    for (std::size_t k = 0; k < template_points; ++k) {
      const double birth = uniform(rng, lo, lo + 0.1);
      const double death = std::min(1.0, birth + uniform(rng, 0.25, 0.6));
      pairs.emplace_back(birth, death, kPairTypes[k % 3]);
    }
    e.templates.emplace_back(std::move(pairs), 0.0, 1.0, "cluster_" + std::to_string(c));
  }
  const auto noise_count = static_cast<std::size_t>(
      std::llround(noise_fraction * static_cast<double>(template_points)));
  for (std::size_t n = 0; n < 3 * per_cluster; ++n) {
    const std::size_t c = n % 3;
    std::vector<PersistencePair> pairs;
    for (const auto& p : e.templates[c].pairs()) {
      const double b = std::clamp(p.birth() + uniform(rng, -0.01, 0.01), 0.0, 1.0);
      const double d = std::clamp(p.death() + uniform(rng, -0.01, 0.01), b, 1.0);
      pairs.emplace_back(b, d, p.type());
    }
    for (std::size_t k = 0; k < noise_count; ++k) {
      const double b = uniform(rng, 0.0, 0.97);
      pairs.emplace_back(b, b + uniform(rng, 0.002, 0.02), kPairTypes[k % 3]);
    }
    char label[32];
    std::snprintf(label, sizeof label, "member_%02zu", n);
    e.members.emplace_back(std::move(pairs), 0.0, 1.0, label);
    e.classes.push_back("cluster_" + std::to_string(c));
  }
  return e;
}

}  // namespace wassdict::testing
