#include "qzone/compare.hpp"

#include <algorithm>
#include <cstdio>

#include "json.hpp"

namespace qzone {

namespace {

SelectionPolicy selection_for(const std::string& method) {
  if (method == kMethodHybrid) return SelectionPolicy::impact;
  if (method == kMethodBaselineRandom) return SelectionPolicy::random;
  if (method == kMethodBaselineRoundRobin) return SelectionPolicy::round_robin;
  throw ValidationError("unknown method '" + method + "' (expected direct, hybrid, baseline-random or baseline-roundrobin)");
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

void validate(const CompareOptions& options) {
  if (options.seeds.empty()) throw ValidationError("at least one seed is required");
  if (options.budget == 0) throw ValidationError("budget must be positive");
  if (options.q == 0) throw ValidationError("q must be at least 1");
  if (options.subproblem_sweeps == 0) throw ValidationError("subproblem sweeps must be positive");
  if (options.patience == 0) throw ValidationError("patience must be at least 1");
  if (options.methods.empty()) throw ValidationError("at least one method is required");
  for (const auto& m : options.methods) {
    if (m != kMethodDirect) selection_for(m);
  }
}

std::size_t direct_sweeps(std::size_t budget, std::size_t num_vars) {
  return std::max<std::size_t>(1, budget / std::max<std::size_t>(1, num_vars));
}

HybridConfig decomposed_config(const CompareOptions& options, SelectionPolicy selection,
                               std::uint64_t seed, std::size_t num_vars) {
  HybridConfig config;
  config.q = options.q;
  config.selection = selection;
  config.subsolver.kind = SubSolverKind::anneal;
  config.subsolver.budget = options.subproblem_sweeps;
  config.subsolver.seed = seed;
  config.seed = seed;
  config.init = options.init;
  config.ranking = options.ranking;
  config.patience = options.patience;
  const std::size_t per_iteration =
      std::max<std::size_t>(1, std::min(options.q, num_vars)) * options.subproblem_sweeps;
  config.max_iterations = std::max<std::size_t>(1, options.budget / per_iteration);
  return config;
}

RunTrajectory run_method(const QuboModel& model, const std::string& method,
                         const CompareOptions& options, std::uint64_t seed) {
  if (method == kMethodDirect) {
    SubSolverConfig sub;
    sub.kind = SubSolverKind::anneal;
    sub.budget = direct_sweeps(options.budget, model.num_vars());
    sub.seed = seed;
    return run_direct(model, sub);
  }
  const HybridConfig config = decomposed_config(options, selection_for(method), seed, model.num_vars());
  return config.selection == SelectionPolicy::impact ? run_hybrid(model, config)
                                                     : run_classical_baseline(model, config);
}

double median(std::vector<double> values) {
  if (values.empty()) throw ValidationError("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

const MethodSummary* CompareReport::find(const std::string& method) const {
  for (const auto& row : rows) {
    if (row.method == method) return &row;
  }
  return nullptr;
}

CompareReport compare_methods(const QuboModel& model, const CompareOptions& options) {
  validate(options);
  CompareReport report;
  report.seeds = options.seeds;
  report.budget = options.budget;
  report.q = options.q;
  for (const auto& method : options.methods) {
    MethodSummary row;
    row.method = method;
    for (std::uint64_t seed : options.seeds) {
      const RunTrajectory traj = run_method(model, method, options, seed);
      row.finals.push_back(traj.final.objective);
      row.evaluations.push_back(traj.total_evaluations());
      row.iterations.push_back(traj.iterations.size());
    }
    row.median = median(row.finals);
    row.best = *std::min_element(row.finals.begin(), row.finals.end());
    report.rows.push_back(std::move(row));
  }
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const MethodSummary& a, const MethodSummary& b) { return a.median < b.median; });
  return report;
}

std::string report_to_text(const CompareReport& report) {
  std::string out = "seeds: " + std::to_string(report.seeds.size()) +
                    "  budget: " + std::to_string(report.budget) + "  q: " + std::to_string(report.q) + "\n";
  char line[160];
  std::snprintf(line, sizeof line, "%-20s %14s %14s %16s\n", "method", "median", "best", "median_evals");
  out += line;
  for (const auto& row : report.rows) {
    std::vector<double> evals(row.evaluations.begin(), row.evaluations.end());
    std::snprintf(line, sizeof line, "%-20s %14s %14s %16s\n", row.method.c_str(),
                  fixed(row.median, 4).c_str(), fixed(row.best, 4).c_str(),
                  fixed(median(evals), 0).c_str());
    out += line;
  }
  return out;
}

std::string report_to_json(const CompareReport& report) {
  nlohmann::json doc;
  doc["format_version"] = kFormatVersion;
  doc["seeds"] = report.seeds;
  doc["budget"] = report.budget;
  doc["q"] = report.q;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"method", row.method},
                    {"median", row.median},
                    {"best", row.best},
                    {"finals", row.finals},
                    {"evaluations", row.evaluations},
                    {"iterations", row.iterations}});
  }
  doc["rows"] = std::move(rows);
  return doc.dump(1) + "\n";
}

}  // namespace qzone
