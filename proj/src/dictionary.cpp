#include "wassdict/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "atom_mask.hpp"

namespace wassdict {

std::size_t trim_count(std::size_t atom_count, std::size_t augmented_size, std::size_t size_cap) {
  if (atom_count == 0 || augmented_size * atom_count <= size_cap) return 0;
  const std::size_t excess = augmented_size * atom_count - size_cap;
  return (excess + atom_count - 1) / atom_count;
}

namespace detail {

MaskedAtoms::MaskedAtoms(std::vector<TypedPoints> atoms) : points(std::move(atoms)) {
  alive.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    for (PairType t : kPairTypes) alive[i][type_index(t)].assign(points[i][t].size(), 1);
}

std::size_t MaskedAtoms::alive_count(std::size_t atom) const {
  std::size_t n = 0;
  for (const auto& mask : alive[atom]) n += static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1));
  return n;
}

std::size_t MaskedAtoms::alive_total() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < points.size(); ++i) n += alive_count(i);
  return n;
}

void MaskedAtoms::append(std::size_t atom, PairType t, Point p) {
  points[atom][t].push_back(p);
  alive[atom][type_index(t)].push_back(1);
}

void MaskedAtoms::trim(std::size_t size_cap) {
  const std::size_t total = alive_total();
  if (total <= size_cap) return;
  const std::size_t drop = trim_count(points.size(), total, size_cap);
  const std::size_t keep = total - drop;
  struct Entry {
    double persistence;
    std::size_t type, index;
  };
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::vector<Entry> entries;
    for (PairType t : kPairTypes)
      for (std::size_t k = 0; k < points[i][t].size(); ++k)
        if (alive[i][type_index(t)][k])
          entries.push_back({points[i][t][k].persistence(), type_index(t), k});
    if (entries.size() <= keep) continue;
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) { return a.persistence > b.persistence; });
    for (std::size_t e = keep; e < entries.size(); ++e)
      alive[i][entries[e].type][entries[e].index] = 0;
  }
}

std::vector<TypedPoints> MaskedAtoms::compact() const {
  std::vector<TypedPoints> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    for (PairType t : kPairTypes)
      for (std::size_t k = 0; k < points[i][t].size(); ++k)
        if (alive[i][type_index(t)][k]) out[i][t].push_back(points[i][t][k]);
  return out;
}

}  // namespace detail

void trim_atoms(std::vector<TypedPoints>& atoms, std::size_t size_cap) {
  detail::MaskedAtoms masked(std::move(atoms));
  masked.trim(size_cap);
  atoms = masked.compact();
}

Dictionary trim_atoms(const Dictionary& dictionary) {
  if (dictionary.total_size() <= dictionary.size_cap) return dictionary;
  std::vector<TypedPoints> atoms;
  atoms.reserve(dictionary.atom_count());
  for (const auto& a : dictionary.atoms) atoms.push_back(split_by_type(a));
  trim_atoms(atoms, dictionary.size_cap);
  Dictionary out;
  out.size_cap = dictionary.size_cap;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const auto& a = dictionary.atoms[i];
    out.atoms.push_back(to_diagram(atoms[i], a.scalar_min(), a.scalar_max(), a.label()));
  }
  return out;
}

std::vector<std::size_t> far_point_selection(const SquareMatrix& distances, std::size_t m) {
  const std::size_t n = distances.size();
  if (m == 0) throw std::invalid_argument("dictionary needs at least one atom");
  if (m > n)
    throw std::invalid_argument("cannot select " + std::to_string(m) + " atoms from " +
                                std::to_string(n) + " members");
  std::vector<double> score(n, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (double d : distances.row(r)) score[r] += d;
  std::vector<char> taken(n, 0);
  std::vector<std::size_t> picked;
  picked.reserve(m);
  auto argmax = [&](const std::vector<double>& s) {
    std::size_t best = n;
    for (std::size_t r = 0; r < n; ++r)
      if (!taken[r] && (best == n || s[r] > s[best])) best = r;
    return best;
  };
  picked.push_back(argmax(score));
  taken[picked.back()] = 1;
  std::vector<double> to_selected(n, 0.0);
  while (picked.size() < m) {
    for (std::size_t r = 0; r < n; ++r) to_selected[r] += distances(r, picked.back());
    picked.push_back(argmax(to_selected));
    taken[picked.back()] = 1;
  }
  return picked;
}

Dictionary init_dictionary(std::span<const PersistenceDiagram> ensemble, std::size_t m,
                           const SquareMatrix& distances) {
  if (distances.size() != ensemble.size())
    throw std::invalid_argument("distance matrix size differs from ensemble size");
  Dictionary d;
  for (std::size_t idx : far_point_selection(distances, m))
    d.atoms.push_back(ensemble[idx].without_diagonal());
  d.size_cap = kUnboundedSizeCap;
  return d;
}

std::vector<WeightVector> init_weights(std::size_t n, std::size_t m) {
  return std::vector<WeightVector>(n, WeightVector::uniform(m));
}

double dictionary_energy(std::span<const WeightVector> weights, const Dictionary& dictionary,
                         std::span<const PersistenceDiagram> ensemble,
                         const BarycenterOptions& options, Parallelism par) {
  if (weights.size() != ensemble.size())
    throw std::invalid_argument("weight vector count differs from ensemble size");
  std::vector<double> terms(ensemble.size(), 0.0);
  parallel_for(ensemble.size(), par, [&](std::size_t n) {
    const Barycenter y = compute_barycenter(dictionary, weights[n], options);
    terms[n] = squared_wasserstein(y.points(), split_by_type(ensemble[n]));
  });
  return std::accumulate(terms.begin(), terms.end(), 0.0);
}

void OptimizationConfig::validate() const {
  if (stall_limit < 1) throw std::invalid_argument("stall limit must be at least 1");
  if (mode == OptimizationMode::Naive) return;
  if (tau_schedule.empty() || tau_schedule.back() != 0.0)
    throw std::invalid_argument("threshold schedule must end at 0");
  for (std::size_t k = 0; k < tau_schedule.size(); ++k) {
    if (!(tau_schedule[k] >= 0.0 && tau_schedule[k] <= 1.0))
      throw std::invalid_argument("threshold outside [0, 1]");
    if (k > 0 && !(tau_schedule[k] < tau_schedule[k - 1]))
      throw std::invalid_argument("threshold schedule must be strictly decreasing");
  }
}

std::vector<double> OptimizationConfig::effective_schedule() const {
  if (mode == OptimizationMode::Naive) return {0.0};
  return tau_schedule;
}

std::vector<double> make_tau_schedule(double tau0, double step) {
  if (!(tau0 >= 0.0 && tau0 <= 1.0)) throw std::invalid_argument("tau0 must lie in [0, 1]");
  if (tau0 > 0.0 && !(step > 0.0)) throw std::invalid_argument("tau step must be positive");
  std::vector<double> out;
  // Index-based so that 0.2 - 4 * 0.05 lands on 0 rather than a rounding residue.
  for (std::size_t k = 0;; ++k) {
    const double tau = tau0 - static_cast<double>(k) * step;
    if (tau <= step * 1e-9) break;
    out.push_back(tau);
  }
  out.push_back(0.0);
  return out;
}

}  // namespace wassdict
