#include "wassdict/barycenter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "wassdict/error.hpp"

namespace wassdict {

TypedPoints Barycenter::points() const {
  TypedPoints out;
  for (PairType t : kPairTypes)
    for (const Slot& s : block(t).candidate)
      if (!s.diagonal) out[t].push_back(s.point);
  return out;
}

PersistenceDiagram Barycenter::diagram(std::string label) const {
  return to_diagram(points(), scalar_min, scalar_max, std::move(label));
}

std::pair<double, double> global_range(std::span<const PersistenceDiagram> diagrams) {
  if (diagrams.empty()) return {0.0, 0.0};
  double lo = diagrams.front().scalar_min(), hi = diagrams.front().scalar_max();
  for (const auto& d : diagrams) {
    lo = std::min(lo, d.scalar_min());
    hi = std::max(hi, d.scalar_max());
  }
  return {lo, hi};
}

double frechet_energy(const Dictionary& dictionary, const WeightVector& weights,
                      const PersistenceDiagram& candidate) {
  if (weights.size() != dictionary.atom_count())
    throw std::invalid_argument("weight count differs from atom count");
  const TypedPoints b = split_by_type(candidate);
  double energy = 0.0;
  for (std::size_t i = 0; i < dictionary.atom_count(); ++i) {
    if (weights[i] == 0.0) continue;
    energy += weights[i] * squared_wasserstein(split_by_type(dictionary.atoms[i]), b);
  }
  return energy;
}

std::pair<Dictionary, PersistenceDiagram> augment_for_barycenter(
    const Dictionary& dictionary, const PersistenceDiagram& candidate) {
  std::vector<PersistenceDiagram> bare;
  bare.reserve(dictionary.atom_count());
  for (const auto& a : dictionary.atoms) bare.push_back(a.without_diagonal());
  const PersistenceDiagram b = candidate.without_diagonal();

  Dictionary out;
  out.size_cap = dictionary.size_cap;
  for (std::size_t i = 0; i < bare.size(); ++i) {
    std::vector<PersistencePair> pairs = bare[i].pairs();
    for (std::size_t k = 0; k < bare.size(); ++k) {
      if (k == i) continue;
      for (const auto& p : bare[k].pairs()) pairs.push_back(diagonal_projection(p));
    }
    for (const auto& p : b.pairs()) pairs.push_back(diagonal_projection(p));
    out.atoms.emplace_back(std::move(pairs), bare[i].scalar_min(), bare[i].scalar_max(),
                           bare[i].label());
  }
  std::vector<PersistencePair> pairs = b.pairs();
  for (const auto& a : bare)
    for (const auto& p : a.pairs()) pairs.push_back(diagonal_projection(p));
  return {std::move(out),
          PersistenceDiagram(std::move(pairs), b.scalar_min(), b.scalar_max(), b.label())};
}

namespace {

// Working state of one pair type during the iteration.
struct TypeState {
  std::vector<const std::vector<Point>*> atoms;
  std::vector<std::vector<Slot>> atom_slots;
  std::vector<Slot> candidate;
  std::vector<Assignment> matchings;
  std::vector<PriceVector> prices;
  std::vector<double> epsilon;
  std::vector<double> epsilon_floor;

  std::size_t size() const { return candidate.size(); }
  bool exact() const { return size() <= kExactSolverMaxSize; }
};

TypeState make_state(std::span<const TypedPoints> atoms, PairType t,
                     const std::vector<Point>& initial) {
  TypeState s;
  const std::size_t m = atoms.size();
  std::size_t k = initial.size();
  for (const auto& a : atoms) k += a[t].size();
  s.atoms.reserve(m);
  for (const auto& a : atoms) s.atoms.push_back(&a[t]);
  s.candidate.reserve(k);
  for (const Point& p : initial) s.candidate.push_back({p, false});
  for (const auto& a : atoms)
    for (const Point& p : a[t]) s.candidate.push_back({diagonal_projection(p), true});
  s.atom_slots.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    auto& slots = s.atom_slots[i];
    slots.reserve(k);
    for (const Point& p : atoms[i][t]) slots.push_back({p, false});
    slots.resize(k, Slot{{0.0, 0.0}, true});
  }
  s.matchings.resize(m);
  s.prices.resize(m);
  s.epsilon.assign(m, 0.0);
  s.epsilon_floor.assign(m, 0.0);
  return s;
}

double matching_energy(const std::vector<Slot>& candidate, const std::vector<Slot>& atom_slots,
                       const std::vector<std::size_t>& mapping) {
  double e = 0.0;
  for (std::size_t j = 0; j < candidate.size(); ++j)
    e += slot_cost(candidate[j], atom_slots[mapping[j]], DiagonalCost::Projected);
  return e;
}

double state_energy(const std::vector<TypeState>& states, const WeightVector& w) {
  double e = 0.0;
  for (const auto& s : states)
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i] != 0.0 && s.size() > 0)
        e += w[i] * matching_energy(s.candidate, s.atom_slots[i], s.matchings[i].mapping);
  return e;
}

// Returns true if any matching changed.
bool assignment_step(std::vector<TypeState>& states, const WeightVector& w, bool first,
                     Parallelism par) {
  struct Task {
    std::size_t state, atom;
  };
  std::vector<Task> tasks;
  for (std::size_t s = 0; s < states.size(); ++s)
    if (states[s].size() > 0)
      for (std::size_t i = 0; i < w.size(); ++i) tasks.push_back({s, i});
  std::vector<char> changed(tasks.size(), 0);
  parallel_for(tasks.size(), par, [&](std::size_t k) {
    TypeState& st = states[tasks[k].state];
    const std::size_t i = tasks[k].atom;
    const SquareMatrix costs = cost_matrix(st.candidate, st.atom_slots[i], DiagonalCost::Projected);
    if (!st.exact()) {
      if (first) {
        const double max_cost = costs.max_entry();
        st.epsilon_floor[i] =
            std::max(max_cost * 1e-10 / static_cast<double>(st.size()), 1e-300);
        st.epsilon[i] = std::max(max_cost / 4.0, st.epsilon_floor[i]);
      } else {
        st.epsilon[i] = std::max(st.epsilon[i] / 5.0, st.epsilon_floor[i]);
      }
    }
    Assignment next = st.exact() ? solve_exact(costs)
                                 : solve_auction(costs, st.prices[i], st.epsilon[i]);
    if (first) {
      st.matchings[i] = std::move(next);
      changed[k] = 1;
      return;
    }
    // An approximate solve may return a worse matching than the one we hold;
    // keeping the better one makes the energy non-increasing.
    const double held = mapping_cost(costs, st.matchings[i].mapping);
    if (next.total_cost < held && next.mapping != st.matchings[i].mapping) {
      st.matchings[i] = std::move(next);
      changed[k] = 1;
    } else {
      st.matchings[i].total_cost = held;
    }
  });
  return std::any_of(changed.begin(), changed.end(), [](char c) { return c != 0; });
}

bool at_accuracy_floor(const std::vector<TypeState>& states) {
  for (const auto& s : states) {
    if (s.size() == 0 || s.exact()) continue;
    for (std::size_t i = 0; i < s.epsilon.size(); ++i)
      if (s.epsilon[i] > s.epsilon_floor[i]) return false;
  }
  return true;
}

// Moves every candidate point to the minimizer of its weighted matched cost.
//
// For a point matched to off-diagonal atom points a_i (total weight w) and to
// diagonal placeholders (weight 1 - w), the best off-diagonal position is
// Sum lambda_i a_i + (1 - w) * proj(mean of a_i). Deleting the point (moving
// it to the diagonal) costs Sum lambda_i * dist(a_i, diagonal)^2 instead;
// the cheaper of the two is kept.
void update_step(std::vector<TypeState>& states, const WeightVector& w) {
  for (auto& st : states) {
    for (std::size_t j = 0; j < st.size(); ++j) {
      double mass = 0.0;
      Point sum{0.0, 0.0};
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] == 0.0) continue;
        const std::size_t slot = st.matchings[i].mapping[j];
        const Slot& a = st.atom_slots[i][slot];
        if (a.diagonal) continue;
        mass += w[i];
        sum = sum + w[i] * a.point;
      }
      Slot& y = st.candidate[j];
      if (mass <= 0.0) {
        y = {diagonal_projection(y.point), true};
        continue;
      }
      const Point mean = (1.0 / mass) * sum;
      const Point kept = sum + (1.0 - mass) * diagonal_projection(mean);
      double keep_cost = std::max(0.0, 1.0 - mass) * squared_distance_to_diagonal(kept);
      double delete_cost = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] == 0.0) continue;
        const Slot& a = st.atom_slots[i][st.matchings[i].mapping[j]];
        if (a.diagonal) continue;
        keep_cost += w[i] * squared_norm(kept - a.point);
        delete_cost += w[i] * squared_distance_to_diagonal(a.point);
      }
      if (delete_cost < keep_cost || !(kept.death > kept.birth))
        y = {diagonal_projection(mean), true};
      else
        y = {kept, false};
    }
  }
}

std::size_t least_energy_atom(std::span<const TypedPoints> atoms, const WeightVector& w) {
  const std::size_t m = atoms.size();
  if (m == 1) return 0;
  std::vector<double> energy(m, 0.0);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < m; ++i)
      if (i != k && w[i] != 0.0) energy[k] += w[i] * squared_wasserstein(atoms[i], atoms[k]);
  return static_cast<std::size_t>(std::min_element(energy.begin(), energy.end()) - energy.begin());
}

Barycenter run_iteration(std::span<const TypedPoints> atoms, const WeightVector& w,
                         const BarycenterOptions& options, const TypedPoints& initial,
                         double scalar_min, double scalar_max) {
  std::vector<TypeState> states;
  states.reserve(kPairTypeCount);
  for (PairType t : kPairTypes) states.push_back(make_state(atoms, t, initial[t]));

  Barycenter result;
  result.scalar_min = scalar_min;
  result.scalar_max = scalar_max;
  const std::size_t iterations = std::max<std::size_t>(1, options.max_iterations);
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < iterations; ++it) {
    const bool changed = assignment_step(states, w, it == 0, options.parallelism);
    const double energy = state_energy(states, w);
    if (!std::isfinite(energy)) throw NumericalError("non-finite Frechet energy");
    result.energy_history.push_back(energy);
    update_step(states, w);
    if (it > 0 && at_accuracy_floor(states) &&
        (!changed || previous - energy <= options.relative_tolerance * previous))
      break;
    previous = energy;
  }
  result.frechet_energy = state_energy(states, w);

  for (std::size_t t = 0; t < kPairTypeCount; ++t) {
    auto& block = result.blocks[t];
    auto& st = states[t];
    block.candidate = std::move(st.candidate);
    block.matchings = std::move(st.matchings);
    block.atom_sizes.reserve(atoms.size());
    for (const auto* a : st.atoms) block.atom_sizes.push_back(a->size());
    if (block.candidate.empty()) block.matchings.assign(atoms.size(), Assignment{});
  }
  return result;
}

}  // namespace

double matched_energy(const Barycenter& bary, std::span<const TypedPoints> atoms,
                      const WeightVector& weights) {
  double e = 0.0;
  for (PairType t : kPairTypes) {
    const auto& block = bary.block(t);
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] == 0.0) continue;
      for (std::size_t j = 0; j < block.size(); ++j) {
        const std::size_t slot = block.matchings[i].mapping[j];
        const Slot atom_slot = slot < block.atom_sizes[i] ? Slot{atoms[i][t][slot], false}
                                                          : Slot{{0.0, 0.0}, true};
        e += weights[i] * slot_cost(block.candidate[j], atom_slot, DiagonalCost::Projected);
      }
    }
  }
  return e;
}

Barycenter compute_barycenter(std::span<const TypedPoints> atoms, const WeightVector& weights,
                              const BarycenterOptions& options, double scalar_min,
                              double scalar_max, const TypedPoints* warm_start) {
  if (atoms.empty()) throw std::invalid_argument("barycenter needs at least one atom");
  if (weights.size() != atoms.size())
    throw std::invalid_argument("weight count " + std::to_string(weights.size()) +
                                " differs from atom count " + std::to_string(atoms.size()));
  const std::size_t start = least_energy_atom(atoms, weights);
  Barycenter cold = run_iteration(atoms, weights, options, atoms[start], scalar_min, scalar_max);
  if (warm_start == nullptr) return cold;
  Barycenter warm = run_iteration(atoms, weights, options, *warm_start, scalar_min, scalar_max);
  return warm.frechet_energy < cold.frechet_energy ? warm : cold;
}

Barycenter compute_barycenter(const Dictionary& dictionary, const WeightVector& weights,
                              const BarycenterOptions& options, const Barycenter* warm_start) {
  std::vector<TypedPoints> atoms;
  atoms.reserve(dictionary.atom_count());
  for (const auto& a : dictionary.atoms) atoms.push_back(split_by_type(a));
  const auto [lo, hi] = global_range(dictionary.atoms);
  if (warm_start == nullptr) return compute_barycenter(atoms, weights, options, lo, hi);
  const TypedPoints warm = warm_start->points();
  return compute_barycenter(atoms, weights, options, lo, hi, &warm);
}

}  // namespace wassdict
