#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wassdict/diagram.hpp"
#include "wassdict/dictionary_types.hpp"
#include "wassdict/parallel.hpp"
#include "wassdict/transport.hpp"

namespace wassdict {

struct BarycenterOptions {
  /// Stop once the relative decrease of the Frechet energy falls below this.
  double relative_tolerance = 1e-6;
  /// Hard cap on Assignment/Update iterations.
  std::size_t max_iterations = 100;
  /// Budget for the per-atom assignment solves of one iteration.
  Parallelism parallelism = Parallelism::serial();
};

/// Candidate points and their matchings to every atom, for one pair type.
///
/// Atom slot s of atom i refers to the s-th off-diagonal point of a_i of this
/// type when s < atom_sizes[i]; larger slots are diagonal placeholders.
struct BarycenterBlock {
  std::vector<Slot> candidate;
  std::vector<std::size_t> atom_sizes;
  std::vector<Assignment> matchings;

  std::size_t size() const { return candidate.size(); }
  bool matches_atom_point(std::size_t atom, std::size_t slot) const {
    return matchings[atom].mapping[slot] < atom_sizes[atom];
  }
};

/// A weighted Wasserstein barycenter with the matchings that produced it.
struct Barycenter {
  std::array<BarycenterBlock, kPairTypeCount> blocks;
  /// Sum_i lambda_i * (matching cost to a_i) under the stored matchings.
  double frechet_energy = 0.0;
  /// Energy after each Assignment step; non-increasing.
  std::vector<double> energy_history;
  double scalar_min = 0.0;
  double scalar_max = 0.0;

  const BarycenterBlock& block(PairType t) const { return blocks[type_index(t)]; }

  /// Off-diagonal candidate points.
  TypedPoints points() const;
  PersistenceDiagram diagram(std::string label = {}) const;
};

/// Sum_i lambda_i W^2(a_i, B) with optimal matchings.
double frechet_energy(const Dictionary& dictionary, const WeightVector& weights,
                      const PersistenceDiagram& candidate);

/// Two-stage augmentation: every atom receives the diagonal projections of
/// the other atoms' points, then the candidate and the atoms exchange
/// projections. All outputs have size Sum|a_i| + |B|.
std::pair<Dictionary, PersistenceDiagram> augment_for_barycenter(
    const Dictionary& dictionary, const PersistenceDiagram& candidate);

/// Recomputes the Frechet energy of `bary` under its stored matchings.
double matched_energy(const Barycenter& bary, std::span<const TypedPoints> atoms,
                      const WeightVector& weights);

/// Assignment/Update barycenter iteration on typed atoms.
///
/// The candidate starts on the atom of least Frechet energy (lowest index on
/// ties). Each iteration matches the candidate to every atom, diagonal
/// placeholders being priced at the projection distance, then moves each
/// candidate point to the minimizer of its weighted matched cost. When a
/// warm start is given the iteration is also run from it and the lower
/// energy result is returned. Throws std::invalid_argument if the weight
/// count differs from the atom count or there are no atoms.
Barycenter compute_barycenter(std::span<const TypedPoints> atoms, const WeightVector& weights,
                              const BarycenterOptions& options, double scalar_min,
                              double scalar_max, const TypedPoints* warm_start = nullptr);

Barycenter compute_barycenter(const Dictionary& dictionary, const WeightVector& weights,
                              const BarycenterOptions& options = {},
                              const Barycenter* warm_start = nullptr);

/// Scalar range spanning every atom.
std::pair<double, double> global_range(std::span<const PersistenceDiagram> diagrams);

}  // namespace wassdict
