#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "wassdict/barycenter.hpp"
#include "wassdict/diagram.hpp"
#include "wassdict/dictionary_types.hpp"
#include "wassdict/parallel.hpp"
#include "wassdict/transport.hpp"

namespace wassdict {

// ---------------------------------------------------------------------------
// Fixed-matching energies and their gradients.
//
// With the matchings between a barycenter and the atoms, and between the
// barycenter and an input diagram, held fixed, barycenter point j is the
// weighted combination of the m atom points it is matched to (the rows of
// D^j), and contributes || Sum_i lambda_i (D^j_i - x_j) ||^2 to the energy,
// x_j being its matched input point.
// ---------------------------------------------------------------------------

/// D^j: the m atom points matched to one barycenter point, one row per atom.
struct AtomPointBlock {
  std::vector<Point> rows;

  std::size_t size() const { return rows.size(); }
};

struct FixedMatchingProblem {
  std::vector<AtomPointBlock> blocks;
  std::vector<Point> targets;

  std::size_t size() const { return blocks.size(); }
};

/// Sum_j || Sum_i lambda_i (D^j_i - x_j) ||^2.
double weight_energy(const FixedMatchingProblem& problem, std::span<const double> lambda);

/// Component i: 2 Sum_j < D^j_i - x_j , Sum_k lambda_k (D^j_k - x_j) >.
/// Throws std::invalid_argument when block, target and weight sizes disagree.
std::vector<double> weight_gradient(const FixedMatchingProblem& problem,
                                    std::span<const double> lambda);

/// [2 Sum_j ||H^j||_F^2]^-1 with H^j the m x 2 displacement block
/// D^j - x_j. Returns +infinity when every displacement is zero.
double weight_step_bound(const FixedMatchingProblem& problem);

/// Euclidean projection onto the probability simplex (sort-based).
WeightVector project_simplex(std::span<const double> v);

/// Projected gradient step. Requires rho > 0.
WeightVector weight_step(const WeightVector& lambda, std::span<const double> gradient, double rho);

/// e_A(D^j) = || Sum_i lambda_i (D^j_i - x) ||^2.
double atom_pointwise_energy(const AtomPointBlock& block, std::span<const double> lambda, Point x);

/// Row i of the result is 2 lambda_i Sum_k lambda_k (D^j_k - x).
AtomPointBlock atom_gradient_pointwise(const AtomPointBlock& block, std::span<const double> lambda,
                                       Point x);

/// Largest step with guaranteed descent of e_A: 1 / (4m).
inline double atom_step_size(std::size_t m) { return 1.0 / (4.0 * static_cast<double>(m)); }

/// Clamps both coordinates into [scalar_min, scalar_max]; a point left
/// below the diagonal is moved onto it at its midpoint.
Point admissible_projection(Point p, double scalar_min, double scalar_max);

/// block - rho * gradient, each row projected to the admissible region.
/// Requires 0 < rho <= atom_step_size(m).
AtomPointBlock atom_step(const AtomPointBlock& block, const AtomPointBlock& gradient, double rho,
                         double scalar_min, double scalar_max);

// ---------------------------------------------------------------------------
// Atom trimming and initialization.
// ---------------------------------------------------------------------------

/// ceil((m K - S_m) / m), or 0 when that is not positive.
std::size_t trim_count(std::size_t atom_count, std::size_t augmented_size, std::size_t size_cap);

/// Enforces Sum|a_i| <= S_m. With K = Sum|a_i| (the size every atom has after
/// augmentation), each augmented atom drops its trim_count least persistent
/// points, diagonal placeholders first; equivalently every atom keeps at most
/// K - trim_count of its most persistent points. No-op when already under
/// the cap.
Dictionary trim_atoms(const Dictionary& dictionary);
void trim_atoms(std::vector<TypedPoints>& atoms, std::size_t size_cap);

/// Far-point selection: first the row of largest sum, then repeatedly the
/// unselected member farthest (in summed distance) from the selected ones.
/// Lowest index wins ties. Throws std::invalid_argument if m > N or m == 0.
std::vector<std::size_t> far_point_selection(const SquareMatrix& distances, std::size_t m);

/// Copies of the far-point selected members, with no size cap.
Dictionary init_dictionary(std::span<const PersistenceDiagram> ensemble, std::size_t m,
                           const SquareMatrix& distances);

std::vector<WeightVector> init_weights(std::size_t n, std::size_t m);

/// Sum_n W^2(Y(lambda_n, D), X_n) with freshly computed barycenters.
double dictionary_energy(std::span<const WeightVector> weights, const Dictionary& dictionary,
                         std::span<const PersistenceDiagram> ensemble,
                         const BarycenterOptions& options = {},
                         Parallelism par = Parallelism::serial());

// ---------------------------------------------------------------------------
// Joint optimization.
// ---------------------------------------------------------------------------

enum class OptimizationMode { Multiscale, Naive };

struct EnergySample {
  double tau = 0.0;
  std::size_t iteration = 0;
  double wallclock_s = 0.0;
  double energy = 0.0;
};

struct OptimizationConfig {
  /// Persistence thresholds, as fractions of each member's scalar range.
  /// Strictly decreasing, ending at 0. Ignored in naive mode.
  std::vector<double> tau_schedule{0.2, 0.15, 0.10, 0.05, 0.0};
  /// A scale ends after this many consecutive samples without a new best.
  std::size_t stall_limit = 10;
  /// Gradient iterations per scale.
  std::size_t max_iterations = 100;
  OptimizationMode mode = OptimizationMode::Multiscale;
  /// The optimizer itself is deterministic; the seed is carried for the
  /// randomized evaluation steps that consume a learned model.
  std::uint64_t seed = 0;
  Parallelism parallelism = Parallelism::serial();
  BarycenterOptions barycenter;
  /// Called after every energy sample.
  std::function<void(const EnergySample&)> on_sample;

  /// Throws std::invalid_argument on an invalid schedule or stall limit.
  void validate() const;
  /// The thresholds actually visited: tau_schedule, or {0} in naive mode.
  std::vector<double> effective_schedule() const;
};

std::vector<double> make_tau_schedule(double tau0, double step);

struct DictionaryResult {
  Dictionary dictionary;
  std::vector<WeightVector> weights;
  /// Every sample of every scale, in order.
  std::vector<EnergySample> trace;
  /// Lowest energy of the final (full resolution) scale.
  double best_energy = 0.0;
};

/// Alternates one projected weight step per member and one atom pass per
/// member (in member order, trimming after each) on thresholded copies of
/// the ensemble, for each threshold of the schedule. Each scale starts from
/// the best state of the previous one and stops after `stall_limit`
/// non-improving samples or `max_iterations` iterations. Returns the best
/// state of the last scale.
///
/// Throws std::invalid_argument unless 1 <= m <= N, NumericalError if an
/// energy becomes non-finite.
DictionaryResult optimize(std::span<const PersistenceDiagram> ensemble, std::size_t m,
                          std::size_t size_cap, const OptimizationConfig& config);

}  // namespace wassdict
