#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "atom_mask.hpp"
#include "wassdict/dictionary.hpp"
#include "wassdict/error.hpp"

namespace wassdict {

namespace {

constexpr std::size_t kNoPoint = std::numeric_limits<std::size_t>::max();

// One off-diagonal barycenter point with everything the gradient steps need.
struct Term {
  PairType type;
  // Per atom: index of the matched atom point, or kNoPoint for a diagonal slot.
  std::vector<std::size_t> refs;
  // Row positions at fit time. Diagonal-slot rows sit at the projection of
  // the matched points' mean.
  std::vector<Point> rows;
  Point target;
  // True for rows standing for the projection of an unmatched input point.
  bool spawns = false;
};

struct MemberFit {
  double energy = 0.0;
  std::vector<Term> terms;
};

FixedMatchingProblem as_problem(const MemberFit& fit) {
  FixedMatchingProblem p;
  p.blocks.reserve(fit.terms.size());
  p.targets.reserve(fit.terms.size());
  for (const Term& t : fit.terms) {
    p.blocks.push_back({t.rows});
    p.targets.push_back(t.target);
  }
  return p;
}

// Barycenter of the atoms at `lambda`, then its optimal matching to `member`.
MemberFit fit_member(std::span<const TypedPoints> atoms, const WeightVector& lambda,
                     const TypedPoints& member, double fmin, double fmax,
                     const BarycenterOptions& options) {
  const Barycenter y = compute_barycenter(atoms, lambda, options, fmin, fmax);
  const std::size_t m = atoms.size();
  MemberFit fit;
  for (PairType t : kPairTypes) {
    const BarycenterBlock& block = y.block(t);
    std::vector<std::size_t> live;
    for (std::size_t j = 0; j < block.size(); ++j)
      if (!block.candidate[j].diagonal) live.push_back(j);
    const std::vector<Point>& xs = member[t];
    if (live.empty() && xs.empty()) continue;

    std::vector<Point> ys;
    ys.reserve(live.size());
    for (std::size_t j : live) ys.push_back(block.candidate[j].point);
    const std::vector<Slot> rows = augmented_slots(ys, xs);
    const std::vector<Slot> cols = augmented_slots(xs, ys);
    const SquareMatrix costs = cost_matrix(rows, cols, DiagonalCost::AtPosition);
    PriceVector prices;
    const double eps =
        std::max(costs.max_entry() * 1e-11 / static_cast<double>(costs.size()), 1e-300);
    const Assignment psi = solve_assignment(costs, prices, eps);
    for (std::size_t r = 0; r < costs.size(); ++r) fit.energy += costs(r, psi.mapping[r]);

    for (std::size_t k = 0; k < live.size(); ++k) {
      const std::size_t j = live[k];
      Term term{t, std::vector<std::size_t>(m, kNoPoint), std::vector<Point>(m),
                cols[psi.mapping[k]].point};
      double mass = 0.0;
      Point sum{0.0, 0.0};
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t slot = block.matchings[i].mapping[j];
        if (slot >= block.atom_sizes[i]) continue;
        term.refs[i] = slot;
        term.rows[i] = atoms[i][t][slot];
        if (lambda[i] > 0.0) {
          mass += lambda[i];
          sum = sum + lambda[i] * term.rows[i];
        }
      }
      const Point anchor =
          mass > 0.0 ? diagonal_projection((1.0 / mass) * sum) : diagonal_projection(ys[k]);
      for (std::size_t i = 0; i < m; ++i)
        if (term.refs[i] == kNoPoint) term.rows[i] = anchor;
      fit.terms.push_back(std::move(term));
    }
    // Rows standing for the projections of the member's own points are made
    // of diagonal placeholders in every atom. When one is matched to an
    // input point it pulls those placeholders towards it.
    for (std::size_t k = live.size(); k < rows.size(); ++k) {
      const std::size_t col = psi.mapping[k];
      if (col >= xs.size()) continue;
      fit.terms.push_back(Term{t, std::vector<std::size_t>(m, kNoPoint),
                               std::vector<Point>(m, rows[k].point), xs[col], true});
    }
  }
  return fit;
}

struct Snapshot {
  std::vector<TypedPoints> atoms;
  std::vector<WeightVector> weights;
  double energy = std::numeric_limits<double>::infinity();
};

class Optimizer {
 public:
  Optimizer(std::size_t m, std::size_t size_cap, const OptimizationConfig& config, double fmin,
            double fmax)
      : m_(m), cap_(size_cap), config_(config), fmin_(fmin), fmax_(fmax),
        diagonal_floor_(1e-9 * (fmax - fmin)), start_(std::chrono::steady_clock::now()) {
    inner_ = config.barycenter;
    inner_.parallelism = Parallelism::serial();
  }

  // Runs one scale from `state`; returns the best state visited.
  Snapshot run_scale(double tau, Snapshot state, const std::vector<TypedPoints>& members,
                     std::vector<EnergySample>& trace) {
    Snapshot best;
    std::size_t stall = 0;
    for (std::size_t it = 0;; ++it) {
      std::vector<MemberFit> fits(members.size());
      parallel_for(members.size(), config_.parallelism, [&](std::size_t n) {
        fits[n] = fit_member(state.atoms, state.weights[n], members[n], fmin_, fmax_, inner_);
      });
      double energy = 0.0;
      for (const auto& f : fits) energy += f.energy;
      if (!std::isfinite(energy)) throw NumericalError("dictionary energy became non-finite");

      const EnergySample sample{tau, it, elapsed(), energy};
      trace.push_back(sample);
      if (config_.on_sample) config_.on_sample(sample);
      if (energy < best.energy * (1.0 - 1e-9) || it == 0) {
        best.atoms = state.atoms;
        best.weights = state.weights;
        best.energy = energy;
        stall = 0;
      } else {
        ++stall;
      }
      if (stall >= config_.stall_limit || it >= config_.max_iterations) break;

      weight_phase(fits, state.weights);
      atom_phase(fits, state);
    }
    return best;
  }

 private:
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  void weight_phase(const std::vector<MemberFit>& fits, std::vector<WeightVector>& weights) {
    parallel_for(fits.size(), config_.parallelism, [&](std::size_t n) {
      const FixedMatchingProblem problem = as_problem(fits[n]);
      const double rho = weight_step_bound(problem);
      if (std::isinf(rho)) return;
      const std::vector<double> g = weight_gradient(problem, weights[n].values());
      weights[n] = weight_step(weights[n], g, rho);
    });
  }

  // Member by member: move the atom points matched to each barycenter point
  // along the pointwise gradient, then trim. Removed points are masked so the
  // stored matchings of later members keep pointing at the right entries.
  void atom_phase(const std::vector<MemberFit>& fits, Snapshot& state) {
    detail::MaskedAtoms atoms(std::move(state.atoms));
    const double rho = atom_step_size(m_);
    for (std::size_t n = 0; n < fits.size(); ++n) {
      const auto& terms = fits[n].terms;
      const WeightVector& lambda = state.weights[n];
      std::vector<AtomPointBlock> moved(terms.size());
      parallel_for(terms.size(), config_.parallelism, [&](std::size_t k) {
        const Term& term = terms[k];
        AtomPointBlock block{term.rows};
        for (std::size_t i = 0; i < m_; ++i)
          if (term.refs[i] != kNoPoint && atoms.is_alive(i, term.type, term.refs[i]))
            block.rows[i] = atoms.points[i][term.type][term.refs[i]];
        const AtomPointBlock g = atom_gradient_pointwise(block, lambda.values(), term.target);
        moved[k] = atom_step(block, g, rho, fmin_, fmax_);
      });
      for (std::size_t k = 0; k < terms.size(); ++k) {
        const Term& term = terms[k];
        for (std::size_t i = 0; i < m_; ++i) {
          const Point p = moved[k].rows[i];
          // Points within rounding distance of the diagonal count as on it.
          const bool off = p.persistence() > diagonal_floor_;
          const std::size_t ref = term.refs[i];
          if (ref == kNoPoint) {
            // A diagonal placeholder pulled off the diagonal becomes a new point.
            if (term.spawns && off && lambda[i] > 0.0)
              atoms.append(i, term.type, p);
            continue;
          }
          if (!atoms.is_alive(i, term.type, ref)) continue;
          atoms.points[i][term.type][ref] = p;
          if (!off) atoms.kill(i, term.type, ref);
        }
      }
      atoms.trim(cap_);
    }
    state.atoms = atoms.compact();
  }

  std::size_t m_;
  std::size_t cap_;
  const OptimizationConfig& config_;
  BarycenterOptions inner_;
  double fmin_, fmax_;
  double diagonal_floor_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

DictionaryResult optimize(std::span<const PersistenceDiagram> ensemble, std::size_t m,
                          std::size_t size_cap, const OptimizationConfig& config) {
  config.validate();
  if (ensemble.empty()) throw std::invalid_argument("ensemble is empty");
  if (m == 0 || m > ensemble.size())
    throw std::invalid_argument("atom count " + std::to_string(m) + " outside [1, " +
                                std::to_string(ensemble.size()) + "]");
  const auto [fmin, fmax] = global_range(ensemble);
  const std::vector<double> schedule = config.effective_schedule();

  Optimizer opt(m, size_cap, config, fmin, fmax);
  DictionaryResult result;
  Snapshot state;
  std::vector<PersistenceDiagram> previous;
  for (std::size_t s = 0; s < schedule.size(); ++s) {
    const double tau = schedule[s];
    std::vector<PersistenceDiagram> thresholded;
    thresholded.reserve(ensemble.size());
    for (const auto& x : ensemble) thresholded.push_back(threshold(x, tau));
    // A scale that reveals no new pairs would replay the previous one from
    // its best state, step for step.
    if (s > 0 && thresholded == previous) continue;
    previous = thresholded;
    std::vector<TypedPoints> members;
    members.reserve(ensemble.size());
    for (const auto& x : thresholded) members.push_back(split_by_type(x));

    if (s == 0) {
      const SquareMatrix distances = distance_matrix(thresholded, config.parallelism);
      const Dictionary init = init_dictionary(thresholded, m, distances);
      for (const auto& a : init.atoms) state.atoms.push_back(split_by_type(a));
      trim_atoms(state.atoms, size_cap);
      state.weights = init_weights(ensemble.size(), m);
    }
    state = opt.run_scale(tau, std::move(state), members, result.trace);
  }

  result.best_energy = state.energy;
  result.weights = std::move(state.weights);
  result.dictionary.size_cap = size_cap;
  for (std::size_t i = 0; i < state.atoms.size(); ++i)
    result.dictionary.atoms.push_back(
        to_diagram(state.atoms[i], fmin, fmax, "atom_" + std::to_string(i + 1)));
  return result;
}

}  // namespace wassdict
