#include "qzone/hybrid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "qzone/rng.hpp"

namespace qzone {

namespace {

constexpr std::uint64_t kSelectionStream = 0x5e1ec7;

bool runs_exact(const SubSolverConfig& config, std::size_t num_vars) {
  return config.kind == SubSolverKind::exact ||
         (config.kind == SubSolverKind::automatic && num_vars <= config.exact_cap);
}

std::vector<Index> random_subset(Rng& rng, std::size_t n, std::size_t q) {
  std::vector<Index> pool(n);
  std::iota(pool.begin(), pool.end(), Index{0});
  const std::size_t take = std::min(q, n);
  for (std::size_t k = 0; k < take; ++k) {
    std::swap(pool[k], pool[k + rng.below(n - k)]);
  }
  pool.resize(take);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::vector<Index> round_robin_block(std::size_t n, std::size_t q, std::size_t iteration) {
  const std::size_t take = std::min(q, n);
  const std::size_t start = (iteration * take) % n;
  std::vector<Index> block;
  block.reserve(take);
  for (std::size_t k = 0; k < take; ++k) block.push_back(static_cast<Index>((start + k) % n));
  std::sort(block.begin(), block.end());
  return block;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string to_string(SelectionPolicy policy) {
  switch (policy) {
    case SelectionPolicy::impact: return "impact";
    case SelectionPolicy::random: return "random";
    case SelectionPolicy::round_robin: return "round_robin";
  }
  return "unknown";
}

std::string to_string(InitPolicy policy) {
  switch (policy) {
    case InitPolicy::zeros: return "zeros";
    case InitPolicy::random: return "random";
    case InitPolicy::greedy: return "greedy";
  }
  return "unknown";
}

std::string to_string(Termination reason) {
  switch (reason) {
    case Termination::converged: return "converged";
    case Termination::patience: return "patience";
    case Termination::max_iterations: return "max_iterations";
  }
  return "unknown";
}

SelectionPolicy parse_selection_policy(const std::string& name) {
  for (auto p : {SelectionPolicy::impact, SelectionPolicy::random, SelectionPolicy::round_robin}) {
    if (to_string(p) == name) return p;
  }
  throw ValidationError("unknown selection policy '" + name + "'");
}

InitPolicy parse_init_policy(const std::string& name) {
  for (auto p : {InitPolicy::zeros, InitPolicy::random, InitPolicy::greedy}) {
    if (to_string(p) == name) return p;
  }
  throw ValidationError("unknown init policy '" + name + "'");
}

void validate(const HybridConfig& config) {
  if (config.q == 0) throw ValidationError("q must be at least 1");
  if (config.max_iterations == 0) throw ValidationError("max_iterations must be at least 1");
  if (config.patience == 0) throw ValidationError("patience must be at least 1");
  if (!std::isfinite(config.min_relative_improvement) || config.min_relative_improvement < 0.0) {
    throw ValidationError("min_relative_improvement must be finite and non-negative");
  }
  validate(config.subsolver);
}

std::size_t RunTrajectory::total_evaluations() const {
  std::size_t total = 0;
  for (const auto& rec : iterations) total += rec.subsolver_evaluations;
  return total;
}

Assignment initialize(const QuboModel& model, const HybridConfig& config) {
  if (config.warm_start) {
    check_assignment(model, *config.warm_start);
    return *config.warm_start;
  }
  const std::size_t n = model.num_vars();
  if (config.init == InitPolicy::zeros) return Assignment(n, 0);
  Rng rng(config.seed);
  Assignment x(n);
  for (auto& b : x) b = rng.bit();
  if (config.init == InitPolicy::greedy) return solve_greedy(model, x).assignment;
  return x;
}

RunTrajectory run_hybrid(const QuboModel& model, const HybridConfig& config) {
  validate(config);
  const std::size_t n = model.num_vars();
  const std::size_t q = std::min(config.q, n);
  if (config.subsolver.kind == SubSolverKind::exact && q > config.subsolver.exact_cap) {
    throw ValidationError("exact subsolver cannot handle q = " + std::to_string(q) +
                          " (cap " + std::to_string(config.subsolver.exact_cap) +
                          "); lower q or choose a heuristic subsolver");
  }
  const bool deterministic_subsolver = runs_exact(config.subsolver, q) ||
                                       config.subsolver.kind == SubSolverKind::greedy;

  RunTrajectory traj;
  Assignment incumbent = initialize(model, config);
  double incumbent_energy = evaluate(model, incumbent);
  traj.initial_objective = incumbent_energy;
  Rng selection_rng(mix_seed(config.seed, kSelectionStream));
  std::size_t stalled = 0;
  traj.termination = Termination::max_iterations;

  for (std::size_t it = 0; it < config.max_iterations && n > 0; ++it) {
    IterationRecord rec;
    rec.iteration = it;
    rec.objective_before = incumbent_energy;

    switch (config.selection) {
      case SelectionPolicy::impact:
        rec.active = select_active_set(model, incumbent, q, config.ranking).indices;
        break;
      case SelectionPolicy::random:
        rec.active = random_subset(selection_rng, n, q);
        break;
      case SelectionPolicy::round_robin:
        rec.active = round_robin_block(n, q, it);
        break;
    }

    const SubProblem sub = extract_subproblem(model, incumbent, rec.active);
    SubSolverConfig sub_config = config.subsolver;
    sub_config.seed = mix_seed(config.subsolver.seed, it);
    rec.candidate_objective = incumbent_energy;
    try {
      const Assignment start = restrict_to_active(incumbent, sub);
      const SolveResult result = solve(sub.model, sub_config, start);
      rec.subsolver_evaluations = result.evaluations;
      const Assignment candidate = merge_solution(incumbent, sub, result.assignment);
      rec.candidate_objective = evaluate(model, candidate);
      const double threshold =
          incumbent_energy - config.min_relative_improvement * (1.0 + std::abs(incumbent_energy));
      if (rec.candidate_objective < threshold) {
        rec.accepted = true;
        incumbent = candidate;
        incumbent_energy = rec.candidate_objective;
      }
    } catch (const SolverError&) {
      rec.failed = true;
    }
    rec.objective_after = incumbent_energy;
    const bool accepted = rec.accepted;
    const bool full_cover = rec.active.size() == n;
    traj.iterations.push_back(std::move(rec));

    if (accepted) {
      stalled = 0;
      continue;
    }
    // A deterministic subsolver that just failed to improve would see the
    // same subproblem again: the incumbent is optimal over that neighborhood.
    const bool repeats = full_cover || config.selection == SelectionPolicy::impact;
    if (deterministic_subsolver && repeats && !traj.iterations.back().failed) {
      traj.termination = Termination::converged;
      break;
    }
    if (++stalled >= config.patience) {
      traj.termination = Termination::patience;
      break;
    }
  }

  traj.final.objective = evaluate(model, incumbent);
  traj.final.assignment = std::move(incumbent);
  return traj;
}

RunTrajectory run_classical_baseline(const QuboModel& model, const HybridConfig& config) {
  if (config.selection == SelectionPolicy::impact) {
    throw ValidationError("the classical baseline uses random or round_robin selection");
  }
  return run_hybrid(model, config);
}

RunTrajectory run_direct(const QuboModel& model, const SubSolverConfig& subsolver) {
  validate(subsolver);
  const std::size_t n = model.num_vars();
  RunTrajectory traj;
  Assignment incumbent(n, 0);
  double incumbent_energy = evaluate(model, incumbent);
  traj.initial_objective = incumbent_energy;

  const SolveResult result = solve(model, subsolver, incumbent);
  IterationRecord rec;
  rec.objective_before = incumbent_energy;
  rec.candidate_objective = evaluate(model, result.assignment);
  rec.subsolver_evaluations = result.evaluations;
  rec.active.resize(n);
  std::iota(rec.active.begin(), rec.active.end(), Index{0});
  if (rec.candidate_objective < incumbent_energy) {
    rec.accepted = true;
    incumbent = result.assignment;
    incumbent_energy = rec.candidate_objective;
  }
  rec.objective_after = incumbent_energy;
  traj.iterations.push_back(std::move(rec));
  traj.termination = Termination::max_iterations;
  traj.final.objective = incumbent_energy;
  traj.final.assignment = std::move(incumbent);
  return traj;
}

std::string trajectory_to_csv(const RunTrajectory& trajectory) {
  std::string out = "iteration,objective_before,objective_after,accepted,num_active,subsolver_evals\n";
  for (const auto& rec : trajectory.iterations) {
    out += std::to_string(rec.iteration) + "," + format_double(rec.objective_before) + "," +
           format_double(rec.objective_after) + "," + (rec.accepted ? "1" : "0") + "," +
           std::to_string(rec.active.size()) + "," + std::to_string(rec.subsolver_evaluations) + "\n";
  }
  return out;
}

}  // namespace qzone
