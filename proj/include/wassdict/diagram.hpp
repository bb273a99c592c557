#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wassdict {

/// Critical-index pairing of a persistence pair. Transport only ever
/// matches pairs of the same type.
enum class PairType : std::uint8_t { MinSaddle = 0, SaddleSaddle = 1, SaddleMax = 2 };

inline constexpr std::array<PairType, 3> kPairTypes{PairType::MinSaddle, PairType::SaddleSaddle,
                                                    PairType::SaddleMax};
inline constexpr std::size_t kPairTypeCount = kPairTypes.size();

inline constexpr std::size_t type_index(PairType t) { return static_cast<std::size_t>(t); }

/// File token for a pair type: "ms", "ss" or "sm".
std::string_view to_token(PairType type);
std::optional<PairType> pair_type_from_token(std::string_view token);

/// A location in the birth/death plane.
struct Point {
  double birth = 0.0;
  double death = 0.0;

  friend Point operator+(Point a, Point b) { return {a.birth + b.birth, a.death + b.death}; }
  friend Point operator-(Point a, Point b) { return {a.birth - b.birth, a.death - b.death}; }
  friend Point operator*(double s, Point a) { return {s * a.birth, s * a.death}; }
  friend bool operator==(Point a, Point b) = default;

  double persistence() const { return death - birth; }
};

inline double dot(Point a, Point b) { return a.birth * b.birth + a.death * b.death; }
inline double squared_norm(Point a) { return dot(a, a); }

/// Closest point on the birth == death line.
inline Point diagonal_projection(Point p) {
  const double mid = 0.5 * (p.birth + p.death);
  return {mid, mid};
}

/// Squared distance from p to its diagonal projection, (d - b)^2 / 2.
inline double squared_distance_to_diagonal(Point p) {
  const double pers = p.death - p.birth;
  return 0.5 * pers * pers;
}

/// One (birth, death) point of a diagram.
///
/// `is_diagonal()` marks points created by augmentation. Input pairs with
/// zero persistence are kept as ordinary pairs but `on_diagonal()` reports
/// them, and every transport computation treats them as diagonal.
class PersistencePair {
 public:
  /// Throws std::invalid_argument if death < birth, a coordinate is not
  /// finite, or a diagonal point has death != birth.
  PersistencePair(double birth, double death, PairType type, bool diagonal = false);

  static PersistencePair on_diagonal_at(double value, PairType type) {
    return PersistencePair(value, value, type, true);
  }

  double birth() const { return birth_; }
  double death() const { return death_; }
  PairType type() const { return type_; }
  bool is_diagonal() const { return diagonal_; }
  bool on_diagonal() const { return diagonal_ || death_ == birth_; }
  double persistence() const { return death_ - birth_; }
  Point point() const { return {birth_, death_}; }

  friend bool operator==(const PersistencePair&, const PersistencePair&) = default;

 private:
  double birth_;
  double death_;
  PairType type_;
  bool diagonal_;
};

/// Midpoint projection; keeps the pair type and flags the result diagonal.
PersistencePair diagonal_projection(const PersistencePair& pair);

/// A typed multiset of persistence pairs plus the scalar range of the field
/// it was computed from. Immutable once constructed.
class PersistenceDiagram {
 public:
  PersistenceDiagram() = default;

  /// Throws std::invalid_argument if scalar_max < scalar_min or a
  /// non-diagonal pair lies outside [scalar_min, scalar_max].
  PersistenceDiagram(std::vector<PersistencePair> pairs, double scalar_min, double scalar_max,
                     std::string label = {});

  const std::vector<PersistencePair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  const PersistencePair& operator[](std::size_t i) const { return pairs_[i]; }

  /// |X|: number of pairs off the diagonal.
  std::size_t off_diagonal_count() const;

  double scalar_min() const { return scalar_min_; }
  double scalar_max() const { return scalar_max_; }
  double scalar_range() const { return scalar_max_ - scalar_min_; }
  const std::string& label() const { return label_; }

  PersistenceDiagram with_label(std::string label) const;

  /// Off-diagonal points of the given type, in diagram order.
  std::vector<Point> points_of_type(PairType type) const;

  /// Off-diagonal pairs only, any type.
  PersistenceDiagram without_diagonal() const;

  friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;

 private:
  std::vector<PersistencePair> pairs_;
  double scalar_min_ = 0.0;
  double scalar_max_ = 0.0;
  std::string label_;
};

/// Off-diagonal points split by pair type. This is the working form of a
/// diagram inside the transport and optimization code.
struct TypedPoints {
  std::array<std::vector<Point>, kPairTypeCount> by_type;

  std::vector<Point>& operator[](PairType t) { return by_type[type_index(t)]; }
  const std::vector<Point>& operator[](PairType t) const { return by_type[type_index(t)]; }
  std::size_t total_size() const;
};

TypedPoints split_by_type(const PersistenceDiagram& diagram);
PersistenceDiagram to_diagram(const TypedPoints& points, double scalar_min, double scalar_max,
                              std::string label = {});

/// X^tau: non-diagonal pairs with persistence >= tau * (scalar range).
/// Range and label are preserved. Requires 0 <= tau <= 1.
PersistenceDiagram threshold(const PersistenceDiagram& diagram, double tau);

/// Pairwise augmentation of two single-type diagrams.
///
/// Each output receives the diagonal projections of the other input's
/// off-diagonal points, appended in the donor's order. Diagonal points
/// already present in the inputs are dropped first, so both outputs have
/// size |X1| + |X2|.
std::pair<PersistenceDiagram, PersistenceDiagram> augment_pairwise(const PersistenceDiagram& x1,
                                                                   const PersistenceDiagram& x2);

// Text format:
//   #pd v1 fmin=<v> fmax=<v> label=<s>
//   <birth> <death> <ms|ss|sm>
// Scalars are written with 17 significant digits. Diagonal points created by
// augmentation are never written.
PersistenceDiagram parse_diagram(std::istream& in, const std::string& source_name);
void format_diagram(std::ostream& out, const PersistenceDiagram& diagram);

PersistenceDiagram read_diagram(const std::filesystem::path& path);
void write_diagram(const PersistenceDiagram& diagram, const std::filesystem::path& path);

/// Decimal text with 17 significant digits; reads back to the same binary64.
std::string format_scalar(double value);

}  // namespace wassdict
