#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "wassdict/dictionary.hpp"

namespace wassdict {

namespace {

void check_problem(const FixedMatchingProblem& problem, std::size_t m) {
  if (problem.blocks.size() != problem.targets.size())
    throw std::invalid_argument("fixed-matching problem has " +
                                std::to_string(problem.blocks.size()) + " blocks but " +
                                std::to_string(problem.targets.size()) + " targets");
  for (const auto& b : problem.blocks)
    if (b.size() != m)
      throw std::invalid_argument("atom point block has " + std::to_string(b.size()) +
                                  " rows, expected " + std::to_string(m));
}

Point residual(const AtomPointBlock& block, std::span<const double> lambda, Point x) {
  Point r{0.0, 0.0};
  for (std::size_t i = 0; i < block.size(); ++i) r = r + lambda[i] * (block.rows[i] - x);
  return r;
}

}  // namespace

double weight_energy(const FixedMatchingProblem& problem, std::span<const double> lambda) {
  check_problem(problem, lambda.size());
  double e = 0.0;
  for (std::size_t j = 0; j < problem.size(); ++j)
    e += squared_norm(residual(problem.blocks[j], lambda, problem.targets[j]));
  return e;
}

std::vector<double> weight_gradient(const FixedMatchingProblem& problem,
                                    std::span<const double> lambda) {
  check_problem(problem, lambda.size());
  std::vector<double> g(lambda.size(), 0.0);
  for (std::size_t j = 0; j < problem.size(); ++j) {
    const Point x = problem.targets[j];
    const Point r = residual(problem.blocks[j], lambda, x);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += 2.0 * dot(problem.blocks[j].rows[i] - x, r);
  }
  return g;
}

double weight_step_bound(const FixedMatchingProblem& problem) {
  double sum = 0.0;
  for (std::size_t j = 0; j < problem.size(); ++j)
    for (const Point& a : problem.blocks[j].rows) sum += squared_norm(a - problem.targets[j]);
  if (sum == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (2.0 * sum);
}

WeightVector project_simplex(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("cannot project an empty vector");
  for (double x : v)
    if (!std::isfinite(x)) throw std::invalid_argument("simplex projection of non-finite vector");
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double running = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    running += sorted[k];
    const double candidate = (running - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) theta = candidate;
  }
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i] - theta, 0.0);
  // Rounding can leave the sum a few ulps off 1.
  const double sum = std::accumulate(out.begin(), out.end(), 0.0);
  if (sum > 0.0)
    for (double& x : out) x /= sum;
  return WeightVector(std::move(out));
}

WeightVector weight_step(const WeightVector& lambda, std::span<const double> gradient, double rho) {
  if (gradient.size() != lambda.size())
    throw std::invalid_argument("gradient size differs from weight count");
  if (!(rho > 0.0)) throw std::invalid_argument("weight step size must be positive");
  std::vector<double> moved(lambda.size());
  for (std::size_t i = 0; i < moved.size(); ++i) moved[i] = lambda[i] - rho * gradient[i];
  return project_simplex(moved);
}

double atom_pointwise_energy(const AtomPointBlock& block, std::span<const double> lambda,
                             Point x) {
  if (block.size() != lambda.size())
    throw std::invalid_argument("atom point block size differs from weight count");
  return squared_norm(residual(block, lambda, x));
}

AtomPointBlock atom_gradient_pointwise(const AtomPointBlock& block, std::span<const double> lambda,
                                       Point x) {
  if (block.size() != lambda.size())
    throw std::invalid_argument("atom point block size differs from weight count");
  const Point r = residual(block, lambda, x);
  AtomPointBlock g;
  g.rows.reserve(block.size());
  for (std::size_t i = 0; i < block.size(); ++i) g.rows.push_back((2.0 * lambda[i]) * r);
  return g;
}

Point admissible_projection(Point p, double scalar_min, double scalar_max) {
  p.birth = std::clamp(p.birth, scalar_min, scalar_max);
  p.death = std::clamp(p.death, scalar_min, scalar_max);
  if (p.death < p.birth) p = diagonal_projection(p);
  return p;
}

AtomPointBlock atom_step(const AtomPointBlock& block, const AtomPointBlock& gradient, double rho,
                         double scalar_min, double scalar_max) {
  if (block.size() != gradient.size())
    throw std::invalid_argument("atom gradient size differs from block size");
  if (!(rho > 0.0) || rho > atom_step_size(std::max<std::size_t>(1, block.size())))
    throw std::invalid_argument("atom step size outside (0, 1/(4m)]");
  AtomPointBlock out;
  out.rows.reserve(block.size());
  for (std::size_t i = 0; i < block.size(); ++i)
    out.rows.push_back(
        admissible_projection(block.rows[i] - rho * gradient.rows[i], scalar_min, scalar_max));
  return out;
}

}  // namespace wassdict
