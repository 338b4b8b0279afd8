#include "qzone/subsolvers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "qzone/rng.hpp"

namespace qzone {

namespace {

// Local fields f_i = h_i + sum_j J_ij x_j, kept in sync with single flips.
class FieldState {
 public:
  FieldState(const QuboModel& model, Assignment x) : model_(model), x_(std::move(x)) {
    fields_.assign(model.linear().begin(), model.linear().end());
    for (const auto& c : model.couplings()) {
      if (x_[c.j]) fields_[c.i] += c.value;
      if (x_[c.i]) fields_[c.j] += c.value;
    }
    energy_ = evaluate(model, x_);
  }

  double delta(Index i) const { return x_[i] ? -fields_[i] : fields_[i]; }

  void apply(Index i) {
    energy_ += delta(i);
    x_[i] ^= 1;
    const double sign = x_[i] ? 1.0 : -1.0;
    for (const auto& nb : model_.neighbors(i)) fields_[nb.var] += sign * nb.value;
  }

  const Assignment& x() const { return x_; }
  double energy() const { return energy_; }

 private:
  const QuboModel& model_;
  Assignment x_;
  std::vector<double> fields_;
  double energy_ = 0.0;
};

Assignment random_bits(Rng& rng, std::size_t n) {
  Assignment x(n);
  for (auto& b : x) b = rng.bit();
  return x;
}

SolveResult finish(const QuboModel& model, Assignment best, std::size_t evaluations,
                   std::size_t moves) {
  SolveResult result;
  result.energy = evaluate(model, best);
  result.assignment = std::move(best);
  result.evaluations = evaluations;
  result.moves = moves;
  return result;
}

}  // namespace

std::string to_string(SubSolverKind kind) {
  switch (kind) {
    case SubSolverKind::exact: return "exact";
    case SubSolverKind::anneal: return "anneal";
    case SubSolverKind::tabu: return "tabu";
    case SubSolverKind::greedy: return "greedy";
    case SubSolverKind::external: return "external";
    case SubSolverKind::automatic: return "auto";
  }
  return "unknown";
}

SubSolverKind parse_subsolver_kind(const std::string& name) {
  for (auto kind : {SubSolverKind::exact, SubSolverKind::anneal, SubSolverKind::tabu,
                    SubSolverKind::greedy, SubSolverKind::external, SubSolverKind::automatic}) {
    if (to_string(kind) == name) return kind;
  }
  throw ValidationError("unknown subsolver '" + name +
                        "' (expected exact, anneal, tabu, greedy, external or auto)");
}

void validate(const SubSolverConfig& config) {
  if (config.budget == 0) throw ValidationError("subsolver budget must be positive");
  if (!(config.cooling_ratio > 0.0 && config.cooling_ratio < 1.0)) {
    throw ValidationError("cooling ratio must lie in (0, 1)");
  }
  if (config.exact_cap > 62) throw ValidationError("exact cap cannot exceed 62 variables");
  if (config.external_timeout.count() <= 0) throw ValidationError("external timeout must be positive");
}

SolveResult solve_exact(const QuboModel& model, std::size_t cap) {
  const std::size_t n = model.num_vars();
  if (n > cap || n > 62) {
    throw ExactCapExceeded("exact enumeration is limited to " + std::to_string(std::min<std::size_t>(cap, 62)) +
                           " variables but the problem has " + std::to_string(n) +
                           "; use anneal, tabu or greedy instead");
  }
  // Gray-code walk: one flip per state with incrementally maintained energy.
  // Near-ties are settled on exactly re-evaluated energies so that rounding
  // in the running sum never decides the lexicographic tie-break.
  FieldState state(model, Assignment(n, 0));
  Assignment best = state.x();
  double best_running = state.energy();
  double best_exact = state.energy();
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    state.apply(static_cast<Index>(std::countr_zero(step)));
    const double e = state.energy();
    const double tol = 1e-9 * (1.0 + std::abs(best_running));
    if (e < best_running - tol) {
      best = state.x();
      best_running = e;
      best_exact = evaluate(model, best);
    } else if (e <= best_running + tol) {
      const double exact = evaluate(model, state.x());
      if (exact < best_exact || (exact == best_exact && state.x() < best)) {
        best = state.x();
        best_running = e;
        best_exact = exact;
      }
    }
  }
  return finish(model, std::move(best), static_cast<std::size_t>(total), 0);
}

SolveResult solve_anneal(const QuboModel& model, const SubSolverConfig& config) {
  validate(config);
  const std::size_t n = model.num_vars();
  if (n == 0) return finish(model, {}, 0, 0);
  Rng rng(config.seed);
  Assignment start = random_bits(rng, n);

  double t0 = 0.0;
  for (double d : impact_vector(model, start)) t0 = std::max(t0, std::abs(d));
  if (t0 == 0.0) t0 = 1.0;
  const double t_min = 1e-3 * t0;

  FieldState state(model, std::move(start));
  Assignment best = state.x();
  double best_energy = state.energy();
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::size_t evaluations = 0;
  std::size_t moves = 0;
  double temperature = t0;
  // Cooling levels needed to go from t0 to t_min; large budgets spend several
  // sweeps at each level instead of idling at t_min.
  const auto levels = static_cast<std::size_t>(
      std::ceil(std::log(t_min / t0) / std::log(config.cooling_ratio)));
  const std::size_t sweeps_per_level = std::max<std::size_t>(1, config.budget / std::max<std::size_t>(levels, 1));
  for (std::size_t sweep = 0; sweep < config.budget; ++sweep) {
    rng.shuffle(order);
    for (Index i : order) {
      ++evaluations;
      const double d = state.delta(i);
      if (d > 0.0 && rng.uniform() >= std::exp(-d / temperature)) continue;
      state.apply(i);
      ++moves;
      if (state.energy() < best_energy) {
        best_energy = state.energy();
        best = state.x();
      }
    }
    if ((sweep + 1) % sweeps_per_level == 0) {
      temperature = std::max(temperature * config.cooling_ratio, t_min);
    }
  }
  return finish(model, std::move(best), evaluations, moves);
}

SolveResult solve_tabu(const QuboModel& model, const SubSolverConfig& config) {
  validate(config);
  const std::size_t n = model.num_vars();
  if (n == 0) return finish(model, {}, 0, 0);
  Rng rng(config.seed);
  FieldState state(model, random_bits(rng, n));
  Assignment best = state.x();
  double best_energy = state.energy();
  const std::size_t tenure = std::min(config.tabu_tenure, n - 1);
  std::vector<std::size_t> tabu_until(n, 0);
  std::size_t evaluations = 0;
  for (std::size_t step = 0; step < config.budget; ++step) {
    std::optional<Index> pick;
    std::optional<Index> fallback;
    for (Index i = 0; i < n; ++i) {
      ++evaluations;
      const double d = state.delta(i);
      if (!fallback || d < state.delta(*fallback)) fallback = i;
      const bool aspirates = state.energy() + d < best_energy;
      if (tabu_until[i] > step && !aspirates) continue;
      if (!pick || d < state.delta(*pick)) pick = i;
    }
    const Index move = pick.value_or(*fallback);
    state.apply(move);
    tabu_until[move] = step + 1 + tenure;
    if (state.energy() < best_energy) {
      best_energy = state.energy();
      best = state.x();
    }
  }
  return finish(model, std::move(best), evaluations, config.budget);
}

SolveResult solve_greedy(const QuboModel& model, std::span<const std::uint8_t> start,
                         std::size_t max_flips, const DescentObserver& observer) {
  check_assignment(model, start);
  Assignment x(start.begin(), start.end());
  std::size_t evaluations = 0;
  std::size_t flips = 0;
  while (max_flips == 0 || flips < max_flips) {
    // Deltas are recomputed from scratch so a flip and its reversal are exact negatives.
    const auto deltas = impact_vector(model, x);
    evaluations += deltas.size();
    const auto it = std::min_element(deltas.begin(), deltas.end());
    if (it == deltas.end() || *it >= 0.0) break;
    x[static_cast<std::size_t>(it - deltas.begin())] ^= 1;
    ++flips;
    if (observer) observer(x, evaluate(model, x));
  }
  return finish(model, std::move(x), evaluations, flips);
}

SolveResult solve(const QuboModel& model, const SubSolverConfig& config,
                  std::span<const std::uint8_t> start) {
  switch (config.kind) {
    case SubSolverKind::exact: return solve_exact(model, config.exact_cap);
    case SubSolverKind::anneal: return solve_anneal(model, config);
    case SubSolverKind::tabu: return solve_tabu(model, config);
    case SubSolverKind::greedy: {
      validate(config);
      if (!start.empty()) return solve_greedy(model, start, config.budget);
      Rng rng(config.seed);
      return solve_greedy(model, random_bits(rng, model.num_vars()), config.budget);
    }
    case SubSolverKind::external: return solve_external(model, config);
    case SubSolverKind::automatic:
      return model.num_vars() <= config.exact_cap ? solve_exact(model, config.exact_cap)
                                                  : solve_anneal(model, config);
  }
  throw ValidationError("unhandled subsolver kind");
}

}  // namespace qzone
