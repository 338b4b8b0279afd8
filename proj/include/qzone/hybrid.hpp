#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qzone/decomposition.hpp"
#include "qzone/subsolvers.hpp"
#include "qzone/zoning.hpp"

namespace qzone {

enum class SelectionPolicy { impact, random, round_robin };
enum class InitPolicy { zeros, random, greedy };
enum class Termination { converged, patience, max_iterations };

std::string to_string(SelectionPolicy policy);
std::string to_string(InitPolicy policy);
std::string to_string(Termination reason);
SelectionPolicy parse_selection_policy(const std::string& name);
InitPolicy parse_init_policy(const std::string& name);

struct HybridConfig {
  std::size_t q = 16;
  SelectionPolicy selection = SelectionPolicy::impact;
  ImpactRanking ranking = ImpactRanking::most_negative;
  SubSolverConfig subsolver;
  std::size_t max_iterations = 20;
  /// Consecutive non-improving iterations tolerated before stopping.
  std::size_t patience = 2;
  double min_relative_improvement = 1e-9;
  InitPolicy init = InitPolicy::zeros;
  /// Drives initialization and random subset selection.
  std::uint64_t seed = 0;
  /// Overrides `init` when set.
  std::optional<Assignment> warm_start;
};

void validate(const HybridConfig& config);

struct IterationRecord {
  std::size_t iteration = 0;
  double objective_before = 0.0;
  double objective_after = 0.0;
  /// Global energy of the merged candidate; equals objective_before when the
  /// subsolver failed.
  double candidate_objective = 0.0;
  std::vector<Index> active;
  bool accepted = false;
  bool failed = false;
  std::size_t subsolver_evaluations = 0;
};

struct RunTrajectory {
  double initial_objective = 0.0;
  std::vector<IterationRecord> iterations;
  Partition final;
  Termination termination = Termination::max_iterations;

  std::size_t total_evaluations() const;
};

/// Starting assignment for `config` (warm start, zeros, random or greedy).
Assignment initialize(const QuboModel& model, const HybridConfig& config);

/// Iterative decomposition: select, extract, subsolve, merge, accept if the
/// merged energy beats the incumbent by the relative threshold.
RunTrajectory run_hybrid(const QuboModel& model, const HybridConfig& config);

/// run_hybrid restricted to the unguided random or round_robin policies.
RunTrajectory run_classical_baseline(const QuboModel& model, const HybridConfig& config);

/// One full-problem subsolver call from the all-zero vector, recorded as a
/// single iteration.
RunTrajectory run_direct(const QuboModel& model, const SubSolverConfig& subsolver);

/// CSV with columns iteration, objective_before, objective_after, accepted,
/// num_active, subsolver_evals.
std::string trajectory_to_csv(const RunTrajectory& trajectory);

}  // namespace qzone
