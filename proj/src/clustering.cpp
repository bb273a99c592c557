#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <string>

#include "wassdict/reduce.hpp"

namespace wassdict {

namespace {

double squared_distance(Vec2 a, Vec2 b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

struct Clustering {
  std::vector<std::size_t> labels;
  double inertia = std::numeric_limits<double>::infinity();
};

std::vector<Vec2> plus_plus_seeds(std::span<const Vec2> points, std::size_t k,
                                  std::mt19937_64& rng) {
  std::vector<Vec2> centers;
  centers.reserve(k);
  std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
  centers.push_back(points[pick(rng)]);
  std::vector<double> d2(points.size());
  while (centers.size() < k) {
    double total = 0.0;
    for (std::size_t p = 0; p < points.size(); ++p) {
      d2[p] = std::numeric_limits<double>::infinity();
      for (const Vec2& c : centers) d2[p] = std::min(d2[p], squared_distance(points[p], c));
      total += d2[p];
    }
    if (!(total > 0.0)) {
      centers.push_back(points[pick(rng)]);
      continue;
    }
    double target = std::uniform_real_distribution<double>(0.0, total)(rng);
    std::size_t chosen = points.size() - 1;
    for (std::size_t p = 0; p < points.size(); ++p) {
      if (target < d2[p]) {
        chosen = p;
        break;
      }
      target -= d2[p];
    }
    centers.push_back(points[chosen]);
  }
  return centers;
}

Clustering lloyd(std::span<const Vec2> points, std::vector<Vec2> centers) {
  const std::size_t k = centers.size();
  Clustering c;
  c.labels.assign(points.size(), k);
  for (int it = 0; it < 300; ++it) {
    bool changed = false;
    for (std::size_t p = 0; p < points.size(); ++p) {
      std::size_t best = 0;
      for (std::size_t j = 1; j < k; ++j)
        if (squared_distance(points[p], centers[j]) < squared_distance(points[p], centers[best]))
          best = j;
      if (best != c.labels[p]) {
        c.labels[p] = best;
        changed = true;
      }
    }
    if (!changed) break;
    std::vector<Vec2> sum(k);
    std::vector<std::size_t> count(k, 0);
    for (std::size_t p = 0; p < points.size(); ++p) {
      sum[c.labels[p]].x += points[p].x;
      sum[c.labels[p]].y += points[p].y;
      ++count[c.labels[p]];
    }
    for (std::size_t j = 0; j < k; ++j)
      if (count[j] > 0) centers[j] = {sum[j].x / count[j], sum[j].y / count[j]};
  }
  c.inertia = 0.0;
  for (std::size_t p = 0; p < points.size(); ++p)
    c.inertia += squared_distance(points[p], centers[c.labels[p]]);
  return c;
}

// Contingency counts of two labelings.
struct Table {
  std::map<std::pair<std::size_t, std::size_t>, double> joint;
  std::map<std::size_t, double> rows, cols;
  double n = 0.0;
};

Table contingency(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  if (a.size() != b.size()) throw std::invalid_argument("labelings differ in length");
  if (a.empty()) throw std::invalid_argument("empty labeling");
  Table t;
  for (std::size_t i = 0; i < a.size(); ++i) {
    t.joint[{a[i], b[i]}] += 1.0;
    t.rows[a[i]] += 1.0;
    t.cols[b[i]] += 1.0;
  }
  t.n = static_cast<double>(a.size());
  return t;
}

double entropy(const std::map<std::size_t, double>& counts, double n) {
  double h = 0.0;
  for (const auto& [_, c] : counts) h -= (c / n) * std::log(c / n);
  return h;
}

double pairs(double c) { return 0.5 * c * (c - 1.0); }

}  // namespace

std::vector<std::size_t> kmeans(std::span<const Vec2> points, std::size_t k, std::uint64_t seed,
                                std::size_t restarts) {
  if (k == 0 || k > points.size())
    throw std::invalid_argument("k-means needs 1 <= k <= point count");
  Clustering best;
  for (std::size_t r = 0; r < std::max<std::size_t>(1, restarts); ++r) {
    std::mt19937_64 rng(seed + r);
    Clustering c = lloyd(points, plus_plus_seeds(points, k, rng));
    if (c.inertia < best.inertia) best = std::move(c);
  }
  return best.labels;
}

double normalized_mutual_information(std::span<const std::size_t> a,
                                     std::span<const std::size_t> b) {
  const Table t = contingency(a, b);
  const double ha = entropy(t.rows, t.n), hb = entropy(t.cols, t.n);
  if (ha == 0.0 && hb == 0.0) return 1.0;
  double mi = 0.0;
  for (const auto& [key, c] : t.joint)
    mi += (c / t.n) * std::log(c * t.n / (t.rows.at(key.first) * t.cols.at(key.second)));
  return std::clamp(mi / (0.5 * (ha + hb)), 0.0, 1.0);
}

double adjusted_rand_index(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  const Table t = contingency(a, b);
  double index = 0.0, sum_rows = 0.0, sum_cols = 0.0;
  for (const auto& [_, c] : t.joint) index += pairs(c);
  for (const auto& [_, c] : t.rows) sum_rows += pairs(c);
  for (const auto& [_, c] : t.cols) sum_cols += pairs(c);
  const double total = pairs(t.n);
  const double expected = total > 0.0 ? sum_rows * sum_cols / total : 0.0;
  const double max_index = 0.5 * (sum_rows + sum_cols);
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

SquareMatrix planar_distances(std::span<const Vec2> points) {
  SquareMatrix d(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      d(i, j) = d(j, i) = std::sqrt(squared_distance(points[i], points[j]));
  return d;
}

double similarity_indicator(const SquareMatrix& planar, const SquareMatrix& reference) {
  if (planar.size() != reference.size())
    throw std::invalid_argument("distance matrices differ in size");
  const std::size_t n = planar.size();
  if (n < 2) return 1.0;
  const double pmax = planar.max_entry(), rmax = reference.max_entry();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = pmax > 0.0 ? planar(i, j) / pmax : 0.0;
      const double r = rmax > 0.0 ? reference(i, j) / rmax : 0.0;
      const double hi = std::max(p, r);
      sum += hi > 0.0 ? std::min(p, r) / hi : 1.0;
    }
  return sum / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
}

std::vector<std::size_t> encode_labels(std::span<const std::string> labels) {
  std::map<std::string, std::size_t> ids;
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(ids.emplace(l, ids.size()).first->second);
  return out;
}

LayoutScores eval_layout(const Layout2D& layout, std::span<const std::string> truth,
                         const SquareMatrix& distances, std::uint64_t seed) {
  if (truth.size() != layout.points.size())
    throw std::invalid_argument("got " + std::to_string(truth.size()) + " labels for " +
                                std::to_string(layout.points.size()) + " layout points");
  if (distances.size() != layout.points.size())
    throw std::invalid_argument("distance matrix size differs from layout size");
  const std::vector<std::size_t> expected = encode_labels(truth);
  const std::size_t k = *std::max_element(expected.begin(), expected.end()) + 1;
  if (k < 2) throw std::invalid_argument("evaluation needs at least two distinct labels");
  const std::vector<std::size_t> found = kmeans(layout.points, k, seed);
  return {normalized_mutual_information(expected, found), adjusted_rand_index(expected, found),
          similarity_indicator(planar_distances(layout.points), distances)};
}

std::vector<std::size_t> k_medoids(const SquareMatrix& distances, std::size_t k) {
  const std::size_t n = distances.size();
  std::vector<std::size_t> medoids = far_point_selection(distances, k);
  std::vector<std::size_t> labels(n, 0);
  auto assign = [&] {
    for (std::size_t p = 0; p < n; ++p) {
      std::size_t best = 0;
      for (std::size_t c = 1; c < k; ++c)
        if (distances(p, medoids[c]) < distances(p, medoids[best])) best = c;
      labels[p] = best;
    }
  };
  for (int it = 0; it < 100; ++it) {
    assign();
    bool changed = false;
    for (std::size_t c = 0; c < k; ++c) {
      std::size_t best = medoids[c];
      double best_cost = std::numeric_limits<double>::infinity();
      for (std::size_t q = 0; q < n; ++q) {
        if (labels[q] != c) continue;
        double cost = 0.0;
        for (std::size_t p = 0; p < n; ++p)
          if (labels[p] == c) cost += distances(p, q);
        if (cost < best_cost) {
          best_cost = cost;
          best = q;
        }
      }
      if (best != medoids[c]) {
        medoids[c] = best;
        changed = true;
      }
    }
    if (!changed) break;
  }
  assign();
  return labels;
}

ClusterConsistency cluster_consistency(const DictionaryModel& model,
                                       std::span<const PersistenceDiagram> ensemble,
                                       std::size_t k, Parallelism par) {
  if (ensemble.size() != model.member_count())
    throw std::invalid_argument("model and ensemble differ in member count");
  std::vector<PersistenceDiagram> rebuilt(ensemble.size());
  parallel_for(ensemble.size(), par, [&](std::size_t n) { rebuilt[n] = reconstruct(model, n); });
  ClusterConsistency out;
  out.input_clusters = k_medoids(distance_matrix(ensemble, par), k);
  out.reconstruction_clusters = k_medoids(distance_matrix(rebuilt, par), k);
  out.ari = adjusted_rand_index(out.input_clusters, out.reconstruction_clusters);
  // Same partition iff the label pairs define a bijection.
  std::map<std::size_t, std::size_t> forward, backward;
  out.identical = true;
  for (std::size_t p = 0; p < ensemble.size() && out.identical; ++p) {
    const auto a = out.input_clusters[p], b = out.reconstruction_clusters[p];
    out.identical = forward.emplace(a, b).first->second == b &&
                    backward.emplace(b, a).first->second == a;
  }
  return out;
}

}  // namespace wassdict
