#pragma once

#include <string>
#include <vector>

#include "qzone/hybrid.hpp"

namespace qzone {

/// Method names used in reports and on the command line.
inline constexpr const char* kMethodDirect = "direct";
inline constexpr const char* kMethodHybrid = "hybrid";
inline constexpr const char* kMethodBaselineRandom = "baseline-random";
inline constexpr const char* kMethodBaselineRoundRobin = "baseline-roundrobin";

struct CompareOptions {
  std::vector<std::uint64_t> seeds;
  /// Total subsolver evaluations each run may spend.
  std::size_t budget = 256'000;
  std::size_t q = 16;
  /// Annealing sweeps per subproblem solve in the decomposed methods.
  std::size_t subproblem_sweeps = 200;
  std::size_t patience = 2;
  InitPolicy init = InitPolicy::zeros;
  ImpactRanking ranking = ImpactRanking::most_negative;
  std::vector<std::string> methods{kMethodDirect, kMethodHybrid, kMethodBaselineRandom,
                                   kMethodBaselineRoundRobin};
};

void validate(const CompareOptions& options);

/// Direct anneal sweeps that spend `budget` on an n-variable model.
std::size_t direct_sweeps(std::size_t budget, std::size_t num_vars);

/// Subsolver and iteration limits for one decomposed run under the options.
HybridConfig decomposed_config(const CompareOptions& options, SelectionPolicy selection,
                               std::uint64_t seed, std::size_t num_vars);

/// Runs one named method under the matched budget.
RunTrajectory run_method(const QuboModel& model, const std::string& method,
                         const CompareOptions& options, std::uint64_t seed);

struct MethodSummary {
  std::string method;
  /// Final objective per seed, in seed order.
  std::vector<double> finals;
  std::vector<std::size_t> evaluations;
  std::vector<std::size_t> iterations;
  double median = 0.0;
  double best = 0.0;
};

struct CompareReport {
  std::vector<std::uint64_t> seeds;
  /// Ordered by median ascending; ties keep the requested method order.
  std::vector<MethodSummary> rows;
  std::size_t budget = 0;
  std::size_t q = 0;

  const MethodSummary* find(const std::string& method) const;
};

CompareReport compare_methods(const QuboModel& model, const CompareOptions& options);

double median(std::vector<double> values);

std::string report_to_text(const CompareReport& report);
std::string report_to_json(const CompareReport& report);

}  // namespace qzone
