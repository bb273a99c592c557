#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "wassdict/diagram.hpp"

namespace wassdict::detail {

// Atoms whose points can be removed without shifting the indices of the
// others, so matchings computed before a removal stay valid.
struct MaskedAtoms {
  std::vector<TypedPoints> points;
  std::vector<std::array<std::vector<char>, kPairTypeCount>> alive;

  explicit MaskedAtoms(std::vector<TypedPoints> atoms);

  std::size_t alive_count(std::size_t atom) const;
  std::size_t alive_total() const;
  void append(std::size_t atom, PairType t, Point p);
  void kill(std::size_t atom, PairType t, std::size_t index) { alive[atom][type_index(t)][index] = 0; }
  bool is_alive(std::size_t atom, PairType t, std::size_t index) const {
    return alive[atom][type_index(t)][index] != 0;
  }
  void trim(std::size_t size_cap);
  std::vector<TypedPoints> compact() const;
};

}  // namespace wassdict::detail
