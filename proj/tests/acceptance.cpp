// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "qzone/cli.hpp"
#include "qzone/compare.hpp"
#include "qzone/hybrid.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace qzone;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Outcome()> body;
};

// Every trajectory produced by the suite, checked by the monotonicity criterion.
std::vector<RunTrajectory> g_trajectories;

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

Outcome delta_consistency() {
  Rng rng(1001);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng.below(64);
    const auto m = oracle::random_model(rng, n, 0.25);
    const auto x = oracle::random_bits(rng, n);
    const Index i = static_cast<Index>(rng.below(n));
    worst = std::max(worst, rel_err(delta_flip(m, x, i), evaluate(m, flip(x, i)) - evaluate(m, x)));
  }
  return {worst <= 1e-9, fmt("1000 triples, worst relative error %.2e", worst)};
}

Outcome balance_expansion() {
  Rng rng(2002);
  double worst = 0.0;
  std::size_t states = 0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t rows = 1 + rng.below(3);
    const std::size_t cols = 1 + rng.below(12 / rows);
    const std::size_t m = 1 + rng.below(4);
    TrafficInstance inst = generate_instance(rows, cols, m, rng.next());
    for (auto& a : inst.attributes) a = 4.0 * rng.uniform();
    const auto model = build_balance_qubo(inst);
    const std::size_t n = inst.num_zones();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      const auto x = oracle::bits_of(mask, n);
      worst = std::max(worst, std::abs(evaluate(model, x) - oracle::balance_penalty(inst, x)));
      ++states;
    }
  }
  return {worst <= 1e-9, fmt("20 instances, %.0f states, worst absolute error %.2e", double(states), worst)};
}

Outcome subqubo_consistency() {
  Rng rng(3003);
  double worst = 0.0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 1 + rng.below(40);
    const auto m = oracle::random_model(rng, n, 0.4);
    const auto x = oracle::random_bits(rng, n);
    std::vector<Index> all(n);
    for (Index i = 0; i < n; ++i) all[i] = i;
    rng.shuffle(all);
    std::vector<Index> active(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(1 + rng.below(n)));
    std::sort(active.begin(), active.end());
    const auto sub = extract_subproblem(m, x, active);
    const auto y = oracle::random_bits(rng, active.size());
    worst = std::max(worst, rel_err(evaluate(sub.model, y), evaluate(m, merge_solution(x, sub, y))));
  }
  return {worst <= 1e-9, fmt("500 cases, worst relative error %.2e", worst)};
}

Outcome oracle_equivalence() {
  int matched = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t rows = 2 + seed % 3;
    const std::size_t cols = 16 / rows;
    const auto model = build_qubo(generate_instance(rows, cols, 3, seed));
    HybridConfig c;
    c.q = model.num_vars();
    c.subsolver.kind = SubSolverKind::exact;
    c.seed = seed;
    auto run = run_hybrid(model, c);
    if (run.final.objective == solve_exact(model).energy) ++matched;
    g_trajectories.push_back(std::move(run));
  }
  return {matched == 20, fmt("%.0f/20 instances match the exact optimum", matched)};
}

// Runs last among the solver criteria so it sees every collected trajectory.
Outcome monotone_trajectories() {
  std::size_t records = 0, violations = 0;
  for (const auto& t : g_trajectories) {
    double last = t.initial_objective;
    for (const auto& rec : t.iterations) {
      ++records;
      const bool ok = rec.objective_before == last && rec.objective_after <= rec.objective_before &&
                      (rec.accepted || rec.objective_after == rec.objective_before);
      if (!ok) ++violations;
      last = rec.objective_after;
    }
    if (t.final.objective != last) ++violations;
  }
  return {violations == 0 && records > 0,
          fmt("%.0f runs, %.0f iterations, %.0f violations", double(g_trajectories.size()), double(records),
              double(violations))};
}

Outcome table_ordering() {
  const auto model = build_qubo(generate_instance(8, 8, 3, 7));
  CompareOptions options;
  for (std::uint64_t s = 0; s < 10; ++s) options.seeds.push_back(s);
  const auto report = compare_methods(model, options);
  const auto* direct = report.find(kMethodDirect);
  const auto* hybrid = report.find(kMethodHybrid);
  const auto* random = report.find(kMethodBaselineRandom);
  int wins = 0;
  for (std::size_t k = 0; k < options.seeds.size(); ++k) wins += hybrid->finals[k] < random->finals[k];
  for (std::uint64_t s : options.seeds) {
    g_trajectories.push_back(run_method(model, kMethodHybrid, options, s));
    g_trajectories.push_back(run_method(model, kMethodBaselineRandom, options, s));
  }
  const bool ordered = direct->median <= hybrid->median && hybrid->median <= random->median;
  return {ordered && wins >= 7, fmt("medians direct %.3f, hybrid %.3f, random baseline %.3f; hybrid wins %.0f/10",
                                    direct->median, hybrid->median, random->median, wins)};
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / ("qzone_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto p = [&](const std::string& name) { return (dir / name).string(); };
  std::ostringstream sink;
  auto run = [&](std::vector<std::string> args) { return cli::run(args, sink, sink); };
  int rc = run({"gen", "--rows", "8", "--cols", "8", "--attrs", "3", "--seed", "7", "--out", p("i.json")});
  for (const char* tag : {"a", "b"}) {
    const std::string t = tag;
    rc |= run({"solve", "--instance", p("i.json"), "--method", "hybrid", "--subsolver", "anneal", "--seed", "3",
               "--out-prefix", p(t + "h")});
    rc |= run({"solve", "--instance", p("i.json"), "--method", "baseline-random", "--subsolver", "tabu", "--seed",
               "3", "--out-prefix", p(t + "r")});
    rc |= run({"compare", "--instance", p("i.json"), "--seeds", "3", "--out-prefix", p(t + "c")});
  }
  std::size_t same = 0, files = 0;
  for (const char* suffix : {"h.solution.json", "h.trajectory.csv", "r.solution.json", "r.trajectory.csv",
                             "c.report.txt", "c.report.json"}) {
    ++files;
    same += read_text_file(p(std::string("a") + suffix)) == read_text_file(p(std::string("b") + suffix));
  }
  fs::remove_all(dir);
  return {rc == 0 && same == files, fmt("%.0f/%.0f output files byte-identical", double(same), double(files))};
}

Outcome heuristic_floor() {
  Rng rng(8008);
  int anneal_hits = 0, tabu_hits = 0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + rng.below(11);
    const auto m = oracle::random_model(rng, n);
    const double best = solve_exact(m).energy;
    SubSolverConfig c;
    c.seed = static_cast<std::uint64_t>(t);
    c.kind = SubSolverKind::anneal;
    anneal_hits += rel_err(solve_anneal(m, c).energy, best) <= 1e-9;
    c.kind = SubSolverKind::tabu;
    tabu_hits += rel_err(solve_tabu(m, c).energy, best) <= 1e-9;
  }
  return {anneal_hits >= 45 && tabu_hits >= 45,
          fmt("anneal %.0f/50, tabu %.0f/50 at the optimum", anneal_hits, tabu_hits)};
}

Outcome complement_symmetry() {
  Rng rng(9009);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t rows = 1 + rng.below(6), cols = 1 + rng.below(6);
    auto inst = generate_instance(rows, cols, 1 + rng.below(4), rng.next());
    inst.lambda = 3.0 * rng.uniform();
    const auto hb = build_balance_qubo(inst);
    const auto ha = build_adjacency_qubo(inst);
    const auto x = oracle::random_bits(rng, inst.num_zones());
    Assignment y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 1 - x[i];
    worst = std::max({worst, rel_err(evaluate(hb, x), evaluate(hb, y)), rel_err(evaluate(ha, x), evaluate(ha, y))});
  }
  return {worst <= 1e-9, fmt("100 cases, worst relative error %.2e", worst)};
}

Outcome external_round_trip() {
  Rng rng(1010);
  SubSolverConfig c;
  c.kind = SubSolverKind::external;
  c.external_timeout = std::chrono::milliseconds(20'000);
  int identical = 0;
  for (int t = 0; t < 10; ++t) {
    const auto m = build_qubo(generate_instance(1 + rng.below(3), 1 + rng.below(4), 2, rng.next()));
    c.external_command = std::string(QZONE_TEST_BACKEND) + " exact";
    const auto remote = solve_external(m, c);
    const auto local = solve_exact(m);
    identical += remote.assignment == local.assignment && remote.energy == local.energy;
  }
  int rejected = 0;
  auto expect = [&](const char* mode, auto tag) {
    c.external_command = std::string(QZONE_TEST_BACKEND) + " " + mode;
    try {
      solve_external(QuboModel(3), c);
    } catch (const decltype(tag)&) {
      ++rejected;
    } catch (...) {
    }
  };
  expect("garbage", BackendResponseError(""));
  expect("nonbinary", BackendResponseError(""));
  expect("short", BackendAssignmentLengthError(""));
  return {identical == 10 && rejected == 3,
          fmt("%.0f/10 results identical, %.0f/3 malformed responses rejected", identical, rejected)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "delta/evaluate consistency", 1.0, delta_consistency},
      {2, "balance expansion", 30.0, balance_expansion},
      {3, "subproblem consistency", 10.0, subqubo_consistency},
      {4, "oracle equivalence", 60.0, oracle_equivalence},
      {6, "method ordering on the 8x8 instance", 300.0, table_ordering},
      {7, "determinism", 300.0, determinism},
      {8, "heuristic quality floor", 60.0, heuristic_floor},
      {9, "complement symmetry", 30.0, complement_symmetry},
      {10, "external backend round trip", 60.0, external_round_trip},
      {5, "monotone trajectories", 30.0, monotone_trajectories},
  };
  std::vector<std::string> lines(11);
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.pass && secs <= c.limit_s;
    failures += !pass;
    char head[128];
    std::snprintf(head, sizeof head, "%s criterion %2d %-36s %7.2fs/%.0fs  ", pass ? "PASS" : "FAIL", c.id, c.name,
                  secs, c.limit_s);
    lines[c.id] = head + o.detail;
  }
  for (std::size_t i = 1; i < lines.size(); ++i) std::printf("%s\n", lines[i].c_str());
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
