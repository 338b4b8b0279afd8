#include "qzone/cli.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qzone/compare.hpp"
#include "qzone/hybrid.hpp"
#include "qzone/render.hpp"
#include "qzone/zoning.hpp"

namespace qzone::cli {

namespace {

namespace fs = std::filesystem;

struct GenArgs {
  std::size_t rows = 8;
  std::size_t cols = 8;
  std::size_t attrs = 3;
  std::uint64_t seed = 0;
  double lambda = 1.0;
  std::string out;
};

struct SolveArgs {
  std::string instance;
  std::string method = "hybrid";
  std::string subsolver = "auto";
  std::size_t q = 16;
  std::uint64_t seed = 0;
  std::size_t max_iters = 20;
  std::size_t patience = 2;
  std::size_t budget = 200;
  std::size_t exact_cap = 24;
  std::string init = "zeros";
  std::string ranking = "most_negative";
  std::string warm_start;
  std::string external_cmd;
  long long timeout_ms = 300'000;
  std::string out_prefix;
};

struct CompareArgs {
  std::string instance;
  std::string seeds = "10";
  std::size_t budget = 256'000;
  std::size_t q = 16;
  std::size_t sweeps = 200;
  std::size_t patience = 2;
  std::string init = "zeros";
  std::string ranking = "most_negative";
  std::vector<std::string> methods{kMethodDirect, kMethodHybrid, kMethodBaselineRandom,
                                   kMethodBaselineRoundRobin};
  std::string out_prefix;
};

struct RenderArgs {
  std::string instance;
  std::string solution;
  std::string out;
  std::string format;
  std::size_t cell_size = 24;
  bool no_boundary = false;
};

struct ImpactArgs {
  std::string instance;
  std::string solution;
  std::string init = "zeros";
  std::uint64_t seed = 0;
  std::size_t top = 10;
  std::string ranking = "most_negative";
  std::string heatmap;
};

ImageFormat format_for(const std::string& explicit_format, const std::string& path) {
  if (!explicit_format.empty()) return parse_image_format(explicit_format);
  return fs::path(path).extension() == ".ppm" ? ImageFormat::ppm : ImageFormat::svg;
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

int cmd_gen(const GenArgs& a, std::ostream& out) {
  TrafficInstance inst = generate_instance(a.rows, a.cols, a.attrs, a.seed);
  inst.lambda = a.lambda;
  write_instance(inst, a.out);
  out << "zones: " << inst.num_zones() << "\nedges: " << inst.edges.size() << "\ntargets:";
  for (double t : balance_targets(inst)) out << ' ' << fixed(t, 6);
  out << "\nwrote " << a.out << "\n";
  return kSuccess;
}

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  const auto start_time = std::chrono::steady_clock::now();
  const TrafficInstance inst = read_instance(a.instance);
  const QuboModel model = build_qubo(inst);
  const std::size_t n = model.num_vars();

  SubSolverConfig sub;
  sub.kind = parse_subsolver_kind(a.subsolver);
  sub.budget = a.budget;
  sub.seed = a.seed;
  sub.exact_cap = a.exact_cap;
  sub.external_command = a.external_cmd;
  sub.external_timeout = std::chrono::milliseconds(a.timeout_ms);
  validate(sub);

  const bool direct = a.method == kMethodDirect;
  HybridConfig config;
  if (!direct) {
    if (a.method == kMethodHybrid) {
      config.selection = SelectionPolicy::impact;
    } else if (a.method == kMethodBaselineRandom) {
      config.selection = SelectionPolicy::random;
    } else if (a.method == kMethodBaselineRoundRobin) {
      config.selection = SelectionPolicy::round_robin;
    } else {
      throw ValidationError("unknown method '" + a.method + "'");
    }
    config.q = a.q;
    config.subsolver = sub;
    config.max_iterations = a.max_iters;
    config.patience = a.patience;
    config.init = parse_init_policy(a.init);
    config.ranking = parse_impact_ranking(a.ranking);
    config.seed = a.seed;
    if (!a.warm_start.empty()) config.warm_start = read_solution(a.warm_start).assignment;
    validate(config);
  }

  const std::size_t problem_size = direct ? n : std::min(a.q, n);
  if (sub.kind == SubSolverKind::exact && problem_size > sub.exact_cap) {
    throw ValidationError("the exact subsolver enumerates at most " + std::to_string(sub.exact_cap) +
                          " variables but this run needs " + std::to_string(problem_size) +
                          (direct ? "; use a heuristic subsolver for direct solves"
                                  : "; lower --q or use a heuristic subsolver"));
  }
  if (config.warm_start && config.warm_start->size() != n) {
    throw ValidationError("warm start has " + std::to_string(config.warm_start->size()) +
                          " entries but the instance has " + std::to_string(n) + " zones");
  }

  const RunTrajectory traj = direct ? run_direct(model, sub) : run_hybrid(model, config);
  std::size_t failed = 0;
  for (const auto& rec : traj.iterations) failed += rec.failed;
  if (failed > 0) out << "warning: " << failed << " iteration(s) failed in the subsolver\n";

  SolutionRecord solution;
  solution.assignment = traj.final.assignment;
  solution.objective = traj.final.objective;
  solution.method = a.method;
  solution.seed = a.seed;
  solution.iterations = traj.iterations.size();

  const std::string solution_path = a.out_prefix + ".solution.json";
  const std::string trajectory_path = a.out_prefix + ".trajectory.csv";
  const std::string summary_path = a.out_prefix + ".summary.json";
  write_solution(solution, solution_path);
  write_text_file(trajectory_path, trajectory_to_csv(traj));

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
  nlohmann::json summary;
  summary["format_version"] = kFormatVersion;
  summary["final_objective"] = traj.final.objective;
  summary["initial_objective"] = traj.initial_objective;
  summary["termination_reason"] = to_string(traj.termination);
  summary["iterations"] = traj.iterations.size();
  summary["subsolver_evaluations"] = traj.total_evaluations();
  summary["cut_edges"] = count_cut_edges(inst, traj.final.assignment);
  summary["wall_time_seconds"] = wall;
  summary["config"] = {{"instance", a.instance},   {"method", a.method},       {"subsolver", a.subsolver},
                       {"q", a.q},                 {"seed", a.seed},           {"max_iters", a.max_iters},
                       {"patience", a.patience},   {"budget", a.budget},       {"init", a.init},
                       {"exact_cap", a.exact_cap}, {"warm_start", a.warm_start}};
  write_text_file(summary_path, summary.dump(1) + "\n");

  out << "method: " << a.method << "\niterations: " << traj.iterations.size()
      << "\ntermination: " << to_string(traj.termination)
      << "\nfinal objective: " << fixed(traj.final.objective, 6) << "\nwrote " << solution_path << ", "
      << trajectory_path << ", " << summary_path << "\n";
  return kSuccess;
}

int cmd_compare(const CompareArgs& a, std::ostream& out) {
  const TrafficInstance inst = read_instance(a.instance);
  const QuboModel model = build_qubo(inst);
  CompareOptions options;
  options.seeds = parse_seeds(a.seeds);
  options.budget = a.budget;
  options.q = a.q;
  options.subproblem_sweeps = a.sweeps;
  options.patience = a.patience;
  options.init = parse_init_policy(a.init);
  options.ranking = parse_impact_ranking(a.ranking);
  options.methods = a.methods;
  const CompareReport report = compare_methods(model, options);
  const std::string text = report_to_text(report);
  out << text;
  if (!a.out_prefix.empty()) {
    write_text_file(a.out_prefix + ".report.txt", text);
    write_text_file(a.out_prefix + ".report.json", report_to_json(report));
    out << "wrote " << a.out_prefix << ".report.txt, " << a.out_prefix << ".report.json\n";
  }
  return kSuccess;
}

int cmd_render(const RenderArgs& a, std::ostream& out) {
  const TrafficInstance inst = read_instance(a.instance);
  const SolutionRecord solution = read_solution(a.solution);
  RenderSpec spec;
  spec.cell_size = a.cell_size;
  spec.show_boundary = !a.no_boundary;
  const ImageFormat format = format_for(a.format, a.out);
  write_text_file(a.out, format == ImageFormat::svg
                             ? render_partition_svg(inst, solution.assignment, spec)
                             : render_partition_ppm(inst, solution.assignment, spec));
  out << "cut edges: " << count_cut_edges(inst, solution.assignment) << "\nwrote " << a.out << "\n";
  return kSuccess;
}

int cmd_impacts(const ImpactArgs& a, std::ostream& out) {
  const TrafficInstance inst = read_instance(a.instance);
  const QuboModel model = build_qubo(inst);
  Assignment x;
  if (!a.solution.empty()) {
    x = read_solution(a.solution).assignment;
  } else {
    HybridConfig config;
    config.init = parse_init_policy(a.init);
    config.seed = a.seed;
    x = initialize(model, config);
  }
  check_assignment(model, x);
  const auto impacts = impact_vector(model, x);
  const ImpactRanking ranking = parse_impact_ranking(a.ranking);
  const ActiveSet top = select_from_impacts(impacts, std::max<std::size_t>(a.top, 1), ranking);
  std::vector<Index> ranked = top.indices;
  std::stable_sort(ranked.begin(), ranked.end(), [&](Index l, Index r) {
    return ranking == ImpactRanking::magnitude ? std::abs(impacts[l]) > std::abs(impacts[r])
                                               : impacts[l] < impacts[r];
  });
  out << "objective: " << fixed(evaluate(model, x), 6) << "\nrank zone row col impact\n";
  for (std::size_t k = 0; k < ranked.size(); ++k) {
    const Index z = ranked[k];
    out << k + 1 << ' ' << z << ' ' << z / inst.cols << ' ' << z % inst.cols << ' ' << fixed(impacts[z], 6)
        << "\n";
  }
  if (!a.heatmap.empty()) {
    write_text_file(a.heatmap, format_for("", a.heatmap) == ImageFormat::svg
                                   ? render_heatmap_svg(inst, impacts)
                                   : render_heatmap_ppm(inst, impacts));
    out << "wrote " << a.heatmap << "\n";
  }
  return kSuccess;
}

}  // namespace

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  auto parse_one = [](const std::string& token) -> std::uint64_t {
    if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos) {
      throw ValidationError("invalid seed '" + token + "'");
    }
    return std::stoull(token);
  };
  std::vector<std::uint64_t> seeds;
  if (text.find(',') == std::string::npos) {
    const std::uint64_t count = parse_one(text);
    if (count == 0) throw ValidationError("seed count must be positive");
    for (std::uint64_t s = 0; s < count; ++s) seeds.push_back(s);
    return seeds;
  }
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (!token.empty()) seeds.push_back(parse_one(token));
  }
  if (seeds.empty()) throw ValidationError("no seeds given");
  return seeds;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Balanced zone bipartitioning via impact-guided QUBO decomposition", "qzone"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic grid instance");
  gen_cmd->add_option("--rows", gen.rows, "Grid rows")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--cols", gen.cols, "Grid columns")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--attrs", gen.attrs, "Attributes per zone")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed, "Generator seed");
  gen_cmd->add_option("--lambda", gen.lambda, "Spatial-coherence weight")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--out", gen.out, "Instance file to write")->required();

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance");
  solve_cmd->add_option("--instance", solve.instance, "Instance file")->required();
  solve_cmd->add_option("--method", solve.method, "direct, hybrid, baseline-random or baseline-roundrobin")
      ->check(CLI::IsMember({kMethodDirect, kMethodHybrid, kMethodBaselineRandom, kMethodBaselineRoundRobin}));
  solve_cmd->add_option("--subsolver", solve.subsolver, "exact, anneal, tabu, greedy, external or auto")
      ->check(CLI::IsMember({"exact", "anneal", "tabu", "greedy", "external", "auto"}));
  solve_cmd->add_option("--q", solve.q, "Active-set size")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--seed", solve.seed, "Run seed");
  solve_cmd->add_option("--max-iters", solve.max_iters, "Iteration cap")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--patience", solve.patience, "Non-improving iterations before stopping")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--budget", solve.budget, "Subsolver budget (sweeps or steps)")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--exact-cap", solve.exact_cap, "Largest problem for exact enumeration");
  solve_cmd->add_option("--init", solve.init, "zeros, random or greedy")
      ->check(CLI::IsMember({"zeros", "random", "greedy"}));
  solve_cmd->add_option("--ranking", solve.ranking, "Impact ranking: magnitude or most_negative")
      ->check(CLI::IsMember({"magnitude", "most_negative"}));
  solve_cmd->add_option("--warm-start", solve.warm_start, "Solution file to start from");
  solve_cmd->add_option("--external-cmd", solve.external_cmd,
                        "External backend command (default: $QZONE_EXTERNAL_SOLVER)");
  solve_cmd->add_option("--timeout-ms", solve.timeout_ms, "External backend timeout")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--out-prefix", solve.out_prefix, "Prefix for output files")->required();

  CompareArgs compare;
  auto* compare_cmd = app.add_subcommand("compare", "Compare methods across seeds under matched budgets");
  compare_cmd->add_option("--instance", compare.instance, "Instance file")->required();
  compare_cmd->add_option("--seeds", compare.seeds, "Seed count N (seeds 0..N-1) or comma-separated list");
  compare_cmd->add_option("--budget", compare.budget, "Subsolver evaluations per run")->check(CLI::PositiveNumber);
  compare_cmd->add_option("--q", compare.q, "Active-set size")->check(CLI::PositiveNumber);
  compare_cmd->add_option("--sweeps", compare.sweeps, "Anneal sweeps per subproblem")->check(CLI::PositiveNumber);
  compare_cmd->add_option("--patience", compare.patience, "Non-improving iterations before stopping")
      ->check(CLI::PositiveNumber);
  compare_cmd->add_option("--init", compare.init, "zeros, random or greedy")
      ->check(CLI::IsMember({"zeros", "random", "greedy"}));
  compare_cmd->add_option("--ranking", compare.ranking, "Impact ranking: magnitude or most_negative")
      ->check(CLI::IsMember({"magnitude", "most_negative"}));
  compare_cmd->add_option("--methods", compare.methods, "Methods to run")
      ->check(CLI::IsMember({kMethodDirect, kMethodHybrid, kMethodBaselineRandom, kMethodBaselineRoundRobin}));
  compare_cmd->add_option("--out-prefix", compare.out_prefix, "Write <prefix>.report.txt and .report.json");

  RenderArgs render;
  auto* render_cmd = app.add_subcommand("render", "Draw a partition map");
  render_cmd->add_option("--instance", render.instance, "Instance file")->required();
  render_cmd->add_option("--solution", render.solution, "Solution file")->required();
  render_cmd->add_option("--out", render.out, "Image file to write")->required();
  render_cmd->add_option("--format", render.format, "svg or ppm (default: from extension)")
      ->check(CLI::IsMember({"svg", "ppm"}));
  render_cmd->add_option("--cell-size", render.cell_size, "Pixels per zone")->check(CLI::PositiveNumber);
  render_cmd->add_flag("--no-boundary", render.no_boundary, "Do not outline cut edges");

  ImpactArgs impacts;
  auto* impacts_cmd = app.add_subcommand("impacts", "Rank zones by flip impact");
  impacts_cmd->add_option("--instance", impacts.instance, "Instance file")->required();
  auto* solution_opt = impacts_cmd->add_option("--solution", impacts.solution, "Solution file");
  impacts_cmd->add_option("--init", impacts.init, "Initial assignment when no solution is given")
      ->check(CLI::IsMember({"zeros", "random", "greedy"}))
      ->excludes(solution_opt);
  impacts_cmd->add_option("--seed", impacts.seed, "Seed for random or greedy init");
  impacts_cmd->add_option("--top", impacts.top, "Zones to list")->check(CLI::PositiveNumber);
  impacts_cmd->add_option("--ranking", impacts.ranking, "Impact ranking: magnitude or most_negative")
      ->check(CLI::IsMember({"magnitude", "most_negative"}));
  impacts_cmd->add_option("--heatmap", impacts.heatmap, "Write an impact heatmap (.svg or .ppm)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const auto parsed = app.get_subcommands();
    err << (parsed.empty() ? app.help() : parsed.front()->help());
    return kUsageError;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen, out);
    if (*solve_cmd) return cmd_solve(solve, out);
    if (*compare_cmd) return cmd_compare(compare, out);
    if (*render_cmd) return cmd_render(render, out);
    if (*impacts_cmd) return cmd_impacts(impacts, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidationError;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << "\n";
    return kSolverError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kSolverError;
  }
  return kUsageError;
}

}  // namespace qzone::cli
