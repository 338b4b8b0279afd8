#include "qzone/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qzone {

std::string to_string(ImpactRanking ranking) {
  return ranking == ImpactRanking::magnitude ? "magnitude" : "most_negative";
}

ImpactRanking parse_impact_ranking(const std::string& name) {
  if (name == "magnitude") return ImpactRanking::magnitude;
  if (name == "most_negative") return ImpactRanking::most_negative;
  throw ValidationError("unknown impact ranking '" + name + "' (expected magnitude or most_negative)");
}

ActiveSet select_from_impacts(std::span<const double> impacts, std::size_t q,
                              ImpactRanking ranking) {
  if (q == 0) throw ValidationError("active-set size q must be at least 1");
  const std::size_t n = impacts.size();
  const std::size_t take = std::min(q, n);
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  auto score = [&](Index i) {
    return ranking == ImpactRanking::magnitude ? std::abs(impacts[i]) : -impacts[i];
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                    [&](Index a, Index b) {
                      const double sa = score(a);
                      const double sb = score(b);
                      return sa != sb ? sa > sb : a < b;
                    });
  order.resize(take);
  std::sort(order.begin(), order.end());
  ActiveSet active;
  active.impacts.reserve(take);
  for (Index i : order) active.impacts.push_back(impacts[i]);
  active.indices = std::move(order);
  return active;
}

ActiveSet select_active_set(const QuboModel& model, std::span<const std::uint8_t> x, std::size_t q,
                            ImpactRanking ranking) {
  const auto impacts = impact_vector(model, x);
  return select_from_impacts(impacts, q, ranking);
}

SubProblem extract_subproblem(const QuboModel& model, std::span<const std::uint8_t> x,
                              std::span<const Index> active) {
  check_assignment(model, x);
  const std::size_t n = model.num_vars();
  constexpr Index kFrozen = static_cast<Index>(-1);
  std::vector<Index> local(n, kFrozen);
  for (std::size_t k = 0; k < active.size(); ++k) {
    const Index g = active[k];
    if (g >= n) throw ValidationError("active index " + std::to_string(g) + " out of range");
    if (k > 0 && active[k - 1] >= g) {
      throw ValidationError("active indices must be distinct and ascending");
    }
    local[g] = static_cast<Index>(k);
  }

  QuboBuilder builder(active.size());
  double constant = model.constant();
  for (Index i = 0; i < n; ++i) {
    if (local[i] != kFrozen) {
      builder.add_linear(local[i], model.linear(i));
    } else if (x[i]) {
      constant += model.linear(i);
    }
  }
  for (const auto& c : model.couplings()) {
    const bool i_active = local[c.i] != kFrozen;
    const bool j_active = local[c.j] != kFrozen;
    if (i_active && j_active) {
      builder.add_quadratic(local[c.i], local[c.j], c.value);
    } else if (i_active) {
      if (x[c.j]) builder.add_linear(local[c.i], c.value);
    } else if (j_active) {
      if (x[c.i]) builder.add_linear(local[c.j], c.value);
    } else if (x[c.i] && x[c.j]) {
      constant += c.value;
    }
  }
  builder.add_constant(constant);

  SubProblem sub;
  sub.model = builder.build();
  sub.global_indices.assign(active.begin(), active.end());
  sub.frozen.assign(x.begin(), x.end());
  return sub;
}

Assignment merge_solution(std::span<const std::uint8_t> x, const SubProblem& sub,
                          std::span<const std::uint8_t> y) {
  if (y.size() != sub.global_indices.size()) {
    throw ValidationError("local assignment has " + std::to_string(y.size()) +
                          " entries but the subproblem has " +
                          std::to_string(sub.global_indices.size()) + " active variables");
  }
  Assignment out(x.begin(), x.end());
  for (std::size_t k = 0; k < y.size(); ++k) {
    const Index g = sub.global_indices[k];
    if (g >= out.size()) throw ValidationError("subproblem does not match the assignment");
    out[g] = y[k];
  }
  return out;
}

Assignment restrict_to_active(std::span<const std::uint8_t> x, const SubProblem& sub) {
  Assignment y;
  y.reserve(sub.global_indices.size());
  for (Index g : sub.global_indices) y.push_back(x[g]);
  return y;
}

}  // namespace qzone
