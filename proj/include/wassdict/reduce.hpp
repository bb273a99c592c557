#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wassdict/barycenter.hpp"
#include "wassdict/dictionary.hpp"
#include "wassdict/dictionary_types.hpp"
#include "wassdict/transport.hpp"

namespace wassdict {

// ---------------------------------------------------------------------------
// Compression codec.
// ---------------------------------------------------------------------------

/// Learned atoms plus one weight vector per ensemble member.
struct DictionaryModel {
  static constexpr int kFormatVersion = 1;

  Dictionary dictionary;
  std::vector<WeightVector> weights;
  std::vector<std::string> member_labels;
  double scalar_min = 0.0;
  double scalar_max = 0.0;
  int format_version = kFormatVersion;

  std::size_t atom_count() const { return dictionary.atom_count(); }
  std::size_t member_count() const { return weights.size(); }

  /// Throws DataError if counts disagree or a weight vector has the wrong size.
  void validate() const;

  friend bool operator==(const DictionaryModel& a, const DictionaryModel& b);
};

DictionaryModel make_model(DictionaryResult result, std::span<const PersistenceDiagram> ensemble);

// Model file:
//   #wd v1 m=<m> N=<N> fmin=<v> fmax=<v>
//   [atoms]
//   <m diagram blocks, each a #pd header followed by its pair lines>
//   [weights]
//   <lambda_1> ... <lambda_m> <label>      (one row per member)
// The atom size cap is not stored; a model read back is capped at its own size.
void format_model(std::ostream& out, const DictionaryModel& model);
DictionaryModel parse_model(std::istream& in, const std::string& source_name);
void write_model(const DictionaryModel& model, const std::filesystem::path& path);
DictionaryModel read_model(const std::filesystem::path& path);

/// round(Sum_n |X_n| / factor). Throws std::invalid_argument if factor < 1
/// or the result is below m.
std::size_t size_cap_for_factor(std::span<const PersistenceDiagram> ensemble, std::size_t m,
                                double factor);

/// Learns a dictionary under the size cap implied by `factor`.
DictionaryModel compress(std::span<const PersistenceDiagram> ensemble, std::size_t m,
                         double factor, const OptimizationConfig& config);

/// Barycenter of the atoms at member n's weights. Throws std::out_of_range.
PersistenceDiagram reconstruct(const DictionaryModel& model, std::size_t n,
                               const BarycenterOptions& options = {});

struct ReconstructionReport {
  std::vector<double> per_member;
  double average = 0.0;
  /// max_{i,j} W(X_i, X_j), the normalization.
  double max_distance = 0.0;
};

/// W(reconstruction_n, X_n) / max pairwise input distance, per member.
/// Throws std::invalid_argument when N == 1, the sizes disagree, or all
/// inputs coincide.
ReconstructionReport reconstruction_error(const DictionaryModel& model,
                                          std::span<const PersistenceDiagram> ensemble,
                                          Parallelism par = Parallelism::serial());

/// Input point records over model records: Sum|X_n| / (Sum|a_i| + N m / 2).
/// A point record is two scalars, so a weight counts as half a record.
double compression_factor(const DictionaryModel& model,
                          std::span<const PersistenceDiagram> ensemble);

// ---------------------------------------------------------------------------
// Planar embedding of a three-atom model.
// ---------------------------------------------------------------------------

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Layout2D {
  std::array<Vec2, 3> triangle;
  std::vector<Vec2> points;
  std::vector<std::string> member_labels;
  std::vector<WeightVector> weights;
};

/// Atom 1 at the origin, atom 2 on the positive x axis, atom 3 above it,
/// with edge lengths equal to the atom distances; member n sits at
/// Sum_i lambda_i v_i. Throws std::invalid_argument if m != 3 or the atom
/// distances do not form a proper triangle.
Layout2D embed_2d(const DictionaryModel& model);

/// Same construction from the three edge lengths.
std::array<Vec2, 3> triangle_from_edges(double d12, double d13, double d23);

struct LayoutScores {
  double nmi = 0.0;
  double ari = 0.0;
  double sim = 0.0;
};

/// k-means (k = number of distinct truth labels) on the layout points,
/// scored against the truth with NMI and ARI, plus SIM between planar and
/// Wasserstein distances. Throws std::invalid_argument on size mismatch or
/// fewer than two distinct labels.
LayoutScores eval_layout(const Layout2D& layout, std::span<const std::string> truth,
                         const SquareMatrix& distances, std::uint64_t seed = 0);

/// Lloyd iterations from k-means++ seeds; the restart with the lowest
/// inertia wins. Restart r draws from mt19937_64(seed + r).
std::vector<std::size_t> kmeans(std::span<const Vec2> points, std::size_t k, std::uint64_t seed,
                                std::size_t restarts = 20);

/// Mutual information over the arithmetic mean of the two entropies. Two
/// single-cluster labelings score 1.
double normalized_mutual_information(std::span<const std::size_t> a,
                                     std::span<const std::size_t> b);
double adjusted_rand_index(std::span<const std::size_t> a, std::span<const std::size_t> b);

/// Mean over pairs i < j of min(p_ij, w_ij) / max(p_ij, w_ij) after each
/// distance set is divided by its maximum. Pairs at distance 0 in both
/// count as 1. Ranges over [0, 1], 1 meaning exact preservation up to scale.
double similarity_indicator(const SquareMatrix& planar, const SquareMatrix& reference);

SquareMatrix planar_distances(std::span<const Vec2> points);

/// Maps string labels to dense ids in order of first appearance.
std::vector<std::size_t> encode_labels(std::span<const std::string> labels);

/// Partitioning around medoids, started from far-point seeds; deterministic.
std::vector<std::size_t> k_medoids(const SquareMatrix& distances, std::size_t k);

struct ClusterConsistency {
  std::vector<std::size_t> input_clusters;
  std::vector<std::size_t> reconstruction_clusters;
  double ari = 0.0;
  bool identical = false;
};

/// k-medoids under W on the inputs and on the reconstructions, compared.
ClusterConsistency cluster_consistency(const DictionaryModel& model,
                                       std::span<const PersistenceDiagram> ensemble,
                                       std::size_t k, Parallelism par = Parallelism::serial());

}  // namespace wassdict
