#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "wassdict/reduce.hpp"

namespace wassdict {

std::size_t size_cap_for_factor(std::span<const PersistenceDiagram> ensemble, std::size_t m,
                                double factor) {
  if (!(factor >= 1.0)) throw std::invalid_argument("compression factor must be >= 1");
  std::size_t total = 0;
  for (const auto& x : ensemble) total += x.off_diagonal_count();
  const auto cap = static_cast<std::size_t>(std::llround(static_cast<double>(total) / factor));
  if (cap < m)
    throw std::invalid_argument("compression factor " + std::to_string(factor) +
                                " leaves an atom budget of " + std::to_string(cap) +
                                " points for " + std::to_string(m) +
                                " atoms; use a smaller factor");
  return cap;
}

DictionaryModel compress(std::span<const PersistenceDiagram> ensemble, std::size_t m,
                         double factor, const OptimizationConfig& config) {
  const std::size_t cap = size_cap_for_factor(ensemble, m, factor);
  return make_model(optimize(ensemble, m, cap, config), ensemble);
}

PersistenceDiagram reconstruct(const DictionaryModel& model, std::size_t n,
                               const BarycenterOptions& options) {
  if (n >= model.member_count())
    throw std::out_of_range("member index " + std::to_string(n) + " out of range [0, " +
                            std::to_string(model.member_count()) + ")");
  const Barycenter y = compute_barycenter(model.dictionary, model.weights[n], options);
  const std::string& label = model.member_labels[n];
  return y.diagram(label).with_label(label);
}

ReconstructionReport reconstruction_error(const DictionaryModel& model,
                                          std::span<const PersistenceDiagram> ensemble,
                                          Parallelism par) {
  if (ensemble.size() != model.member_count())
    throw std::invalid_argument("model has " + std::to_string(model.member_count()) +
                                " members, ensemble has " + std::to_string(ensemble.size()));
  if (ensemble.size() < 2)
    throw std::invalid_argument("reconstruction error needs at least two members");
  const SquareMatrix distances = distance_matrix(ensemble, par);
  ReconstructionReport report;
  report.max_distance = distances.max_entry();
  if (!(report.max_distance > 0.0))
    throw std::invalid_argument("all ensemble members coincide; the error is undefined");
  report.per_member.assign(ensemble.size(), 0.0);
  parallel_for(ensemble.size(), par, [&](std::size_t n) {
    report.per_member[n] =
        wasserstein_distance(reconstruct(model, n), ensemble[n]) / report.max_distance;
  });
  report.average = std::accumulate(report.per_member.begin(), report.per_member.end(), 0.0) /
                   static_cast<double>(ensemble.size());
  return report;
}

double compression_factor(const DictionaryModel& model,
                          std::span<const PersistenceDiagram> ensemble) {
  double input = 0.0;
  for (const auto& x : ensemble) input += static_cast<double>(x.off_diagonal_count());
  const double stored =
      static_cast<double>(model.dictionary.total_size()) +
      0.5 * static_cast<double>(model.member_count() * model.atom_count());
  return stored > 0.0 ? input / stored : 0.0;
}

std::array<Vec2, 3> triangle_from_edges(double d12, double d13, double d23) {
  constexpr double kTol = 1e-9;
  auto fail = [](const std::string& what) { throw std::invalid_argument("degenerate triangle: " + what); };
  if (!(d12 > 0.0)) fail("atoms 1 and 2 coincide");
  if (!(d13 > 0.0)) fail("atoms 1 and 3 coincide");
  if (!(d23 > 0.0)) fail("atoms 2 and 3 coincide");
  if (d12 > d13 + d23 + kTol) fail("d(1,2) exceeds d(1,3) + d(2,3)");
  if (d13 > d12 + d23 + kTol) fail("d(1,3) exceeds d(1,2) + d(2,3)");
  if (d23 > d12 + d13 + kTol) fail("d(2,3) exceeds d(1,2) + d(1,3)");
  const double x = (d13 * d13 - d23 * d23 + d12 * d12) / (2.0 * d12);
  const double y = std::sqrt(std::max(0.0, d13 * d13 - x * x));
  return {Vec2{0.0, 0.0}, Vec2{d12, 0.0}, Vec2{x, y}};
}

Layout2D embed_2d(const DictionaryModel& model) {
  if (model.atom_count() != 3)
    throw std::invalid_argument("planar embedding needs exactly 3 atoms, model has " +
                                std::to_string(model.atom_count()));
  const auto& a = model.dictionary.atoms;
  Layout2D layout;
  layout.triangle = triangle_from_edges(wasserstein_distance(a[0], a[1]),
                                        wasserstein_distance(a[0], a[2]),
                                        wasserstein_distance(a[1], a[2]));
  layout.member_labels = model.member_labels;
  layout.weights = model.weights;
  layout.points.reserve(model.member_count());
  for (const auto& w : model.weights) {
    Vec2 p;
    for (std::size_t i = 0; i < 3; ++i) {
      p.x += w[i] * layout.triangle[i].x;
      p.y += w[i] * layout.triangle[i].y;
    }
    layout.points.push_back(p);
  }
  return layout;
}

}  // namespace wassdict
