#include "wassdict/diagram.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wassdict {

std::string_view to_token(PairType type) {
  switch (type) {
    case PairType::MinSaddle:
      return "ms";
    case PairType::SaddleSaddle:
      return "ss";
    case PairType::SaddleMax:
      return "sm";
  }
  return "??";
}

std::optional<PairType> pair_type_from_token(std::string_view token) {
  for (PairType t : kPairTypes)
    if (to_token(t) == token) return t;
  return std::nullopt;
}

PersistencePair::PersistencePair(double birth, double death, PairType type, bool diagonal)
    : birth_(birth), death_(death), type_(type), diagonal_(diagonal) {
  if (!std::isfinite(birth) || !std::isfinite(death))
    throw std::invalid_argument("persistence pair with non-finite coordinate");
  if (death < birth)
    throw std::invalid_argument("persistence pair with death < birth (" + std::to_string(birth) +
                                ", " + std::to_string(death) + ")");
  if (diagonal && death != birth)
    throw std::invalid_argument("diagonal point must have death == birth");
}

PersistencePair diagonal_projection(const PersistencePair& pair) {
  const Point p = diagonal_projection(pair.point());
  return PersistencePair::on_diagonal_at(p.birth, pair.type());
}

PersistenceDiagram::PersistenceDiagram(std::vector<PersistencePair> pairs, double scalar_min,
                                       double scalar_max, std::string label)
    : pairs_(std::move(pairs)),
      scalar_min_(scalar_min),
      scalar_max_(scalar_max),
      label_(std::move(label)) {
  if (!(scalar_max_ >= scalar_min_))
    throw std::invalid_argument("diagram scalar range has fmax < fmin");
  for (const auto& p : pairs_) {
    if (p.is_diagonal()) continue;
    if (p.birth() < scalar_min_ || p.death() > scalar_max_)
      throw std::invalid_argument("pair (" + format_scalar(p.birth()) + ", " +
                                  format_scalar(p.death()) + ") outside scalar range [" +
                                  format_scalar(scalar_min_) + ", " + format_scalar(scalar_max_) +
                                  "]");
  }
}

std::size_t PersistenceDiagram::off_diagonal_count() const {
  std::size_t n = 0;
  for (const auto& p : pairs_)
    if (!p.on_diagonal()) ++n;
  return n;
}

PersistenceDiagram PersistenceDiagram::with_label(std::string label) const {
  PersistenceDiagram copy = *this;
  copy.label_ = std::move(label);
  return copy;
}

std::vector<Point> PersistenceDiagram::points_of_type(PairType type) const {
  std::vector<Point> out;
  for (const auto& p : pairs_)
    if (p.type() == type && !p.on_diagonal()) out.push_back(p.point());
  return out;
}

PersistenceDiagram PersistenceDiagram::without_diagonal() const {
  std::vector<PersistencePair> kept;
  kept.reserve(pairs_.size());
  for (const auto& p : pairs_)
    if (!p.on_diagonal()) kept.push_back(p);
  return PersistenceDiagram(std::move(kept), scalar_min_, scalar_max_, label_);
}

std::size_t TypedPoints::total_size() const {
  std::size_t n = 0;
  for (const auto& v : by_type) n += v.size();
  return n;
}

TypedPoints split_by_type(const PersistenceDiagram& diagram) {
  TypedPoints out;
  for (const auto& p : diagram.pairs())
    if (!p.on_diagonal()) out[p.type()].push_back(p.point());
  return out;
}

PersistenceDiagram to_diagram(const TypedPoints& points, double scalar_min, double scalar_max,
                              std::string label) {
  std::vector<PersistencePair> pairs;
  pairs.reserve(points.total_size());
  for (PairType t : kPairTypes)
    for (const Point& p : points[t]) pairs.emplace_back(p.birth, p.death, t);
  return PersistenceDiagram(std::move(pairs), scalar_min, scalar_max, std::move(label));
}

PersistenceDiagram threshold(const PersistenceDiagram& diagram, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("threshold tau outside [0, 1]");
  const double cut = tau * diagram.scalar_range();
  std::vector<PersistencePair> kept;
  for (const auto& p : diagram.pairs())
    if (!p.is_diagonal() && p.persistence() >= cut) kept.push_back(p);
  return PersistenceDiagram(std::move(kept), diagram.scalar_min(), diagram.scalar_max(),
                            diagram.label());
}

std::pair<PersistenceDiagram, PersistenceDiagram> augment_pairwise(const PersistenceDiagram& x1,
                                                                   const PersistenceDiagram& x2) {
  const PersistenceDiagram a = x1.without_diagonal();
  const PersistenceDiagram b = x2.without_diagonal();
  std::vector<PersistencePair> out1 = a.pairs();
  std::vector<PersistencePair> out2 = b.pairs();
  out1.reserve(a.size() + b.size());
  out2.reserve(a.size() + b.size());
  for (const auto& p : b.pairs()) out1.push_back(diagonal_projection(p));
  for (const auto& p : a.pairs()) out2.push_back(diagonal_projection(p));
  return {PersistenceDiagram(std::move(out1), a.scalar_min(), a.scalar_max(), a.label()),
          PersistenceDiagram(std::move(out2), b.scalar_min(), b.scalar_max(), b.label())};
}

}  // namespace wassdict
