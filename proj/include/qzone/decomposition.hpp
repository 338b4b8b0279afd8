#pragma once

#include <string>
#include <vector>

#include "qzone/qubo.hpp"

namespace qzone {

enum class ImpactRanking {
  /// Largest |delta H_i| first. Tends to reselect variables a previous
  /// subsolve just settled, since those carry large positive deltas.
  magnitude,
  /// Most negative delta H_i first (default).
  most_negative,
};

struct ActiveSet {
  /// Selected global indices, ascending.
  std::vector<Index> indices;
  /// delta H_i for each selected index, aligned with `indices`.
  std::vector<double> impacts;
};

std::string to_string(ImpactRanking ranking);
ImpactRanking parse_impact_ranking(const std::string& name);

/// Top-q variables of `impacts` under `ranking`, ties to the lower index.
ActiveSet select_from_impacts(std::span<const double> impacts, std::size_t q,
                              ImpactRanking ranking = ImpactRanking::most_negative);

/// Computes the impact vector of `x` and selects the top-q variables.
ActiveSet select_active_set(const QuboModel& model, std::span<const std::uint8_t> x, std::size_t q,
                            ImpactRanking ranking = ImpactRanking::most_negative);

/// Reduced model over the active variables with every other variable held at
/// its value in `frozen`.
///
/// Local linear term i is h_i + sum_{j frozen} J_ij x_j (the canonical form of
/// the effective bias 2 Q_SF x_F), local couplings are the active-active J_ij,
/// and the frozen-only energy is folded into the constant, so
/// evaluate(sub.model, y) == evaluate(model, merge_solution(frozen, sub, y)).
struct SubProblem {
  QuboModel model;
  std::vector<Index> global_indices;
  Assignment frozen;
};

SubProblem extract_subproblem(const QuboModel& model, std::span<const std::uint8_t> x,
                              std::span<const Index> active);

inline SubProblem extract_subproblem(const QuboModel& model, std::span<const std::uint8_t> x,
                                     const ActiveSet& active) {
  return extract_subproblem(model, x, active.indices);
}

/// `x` with the active positions overwritten by the local assignment `y`.
Assignment merge_solution(std::span<const std::uint8_t> x, const SubProblem& sub,
                          std::span<const std::uint8_t> y);

/// The incumbent's values at the active positions.
Assignment restrict_to_active(std::span<const std::uint8_t> x, const SubProblem& sub);

}  // namespace qzone
