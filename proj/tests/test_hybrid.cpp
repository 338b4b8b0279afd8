#include <doctest.h>

#include "qzone/compare.hpp"
#include "qzone/hybrid.hpp"
#include "support/oracles.hpp"

using namespace qzone;

namespace {

void check_monotone(const RunTrajectory& t) {
  double last = t.initial_objective;
  for (const auto& rec : t.iterations) {
    CHECK(rec.objective_before == last);
    if (rec.accepted) {
      CHECK(rec.objective_after <= rec.objective_before);
    } else {
      CHECK(rec.objective_after == rec.objective_before);
    }
    last = rec.objective_after;
  }
  CHECK(t.final.objective == last);
}

HybridConfig exact_config(std::size_t q) {
  HybridConfig c;
  c.q = q;
  c.subsolver.kind = SubSolverKind::exact;
  return c;
}

}  // namespace

TEST_CASE("initialization policies") {
  Rng rng(1);
  const auto m = oracle::random_model(rng, 12);
  HybridConfig c;
  CHECK(initialize(m, c) == Assignment(12, 0));
  c.init = InitPolicy::random;
  c.seed = 42;
  const auto r = initialize(m, c);
  CHECK(initialize(m, c) == r);
  c.init = InitPolicy::greedy;
  CHECK(evaluate(m, initialize(m, c)) <= evaluate(m, r));
  c.warm_start = Assignment(12, 1);
  CHECK(initialize(m, c) == Assignment(12, 1));
  c.warm_start = Assignment(3, 1);
  CHECK_THROWS_AS(initialize(m, c), ValidationError);
}

TEST_CASE("full-cover exact hybrid reaches the optimum") {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const auto t = generate_instance(3, 4, 2, trial);
    const auto m = build_qubo(t);
    const auto run = run_hybrid(m, exact_config(m.num_vars()));
    CHECK(run.final.objective == solve_exact(m).energy);
    CHECK(run.termination == Termination::converged);
    CHECK(run.iterations.size() <= 2);
    check_monotone(run);
  }
}

TEST_CASE("zero model stops by patience at the offset") {
  HybridConfig c;
  c.q = 3;
  c.patience = 3;
  const auto run = run_hybrid(QuboModel(6, 2.0), c);
  CHECK(run.termination == Termination::patience);
  CHECK(run.iterations.size() == 3);
  for (const auto& rec : run.iterations) CHECK(rec.objective_after == 2.0);
}

TEST_CASE("trajectories are monotone and reproducible") {
  const auto m = build_qubo(generate_instance(5, 5, 2, 3));
  for (auto sel : {SelectionPolicy::impact, SelectionPolicy::random, SelectionPolicy::round_robin}) {
    CAPTURE(to_string(sel));
    HybridConfig c;
    c.q = 6;
    c.selection = sel;
    c.seed = 5;
    c.subsolver.seed = 5;
    c.max_iterations = 15;
    c.patience = 4;
    c.init = InitPolicy::random;
    const auto a = run_hybrid(m, c);
    check_monotone(a);
    CHECK(trajectory_to_csv(a) == trajectory_to_csv(run_hybrid(m, c)));
    CHECK(a.final.objective == evaluate(m, a.final.assignment));
    for (const auto& rec : a.iterations) CHECK(rec.active.size() == 6);
  }
}

TEST_CASE("round robin covers contiguous blocks") {
  HybridConfig c;
  c.q = 4;
  c.selection = SelectionPolicy::round_robin;
  c.max_iterations = 3;
  c.patience = 10;
  const auto run = run_classical_baseline(QuboModel(10), c);
  REQUIRE(run.iterations.size() == 3);
  CHECK(run.iterations[0].active == std::vector<Index>{0, 1, 2, 3});
  CHECK(run.iterations[1].active == std::vector<Index>{4, 5, 6, 7});
  CHECK(run.iterations[2].active == std::vector<Index>{0, 1, 8, 9});
}

TEST_CASE("round robin with a single block equals a full solve") {
  const auto m = build_qubo(generate_instance(3, 3, 2, 1));
  auto c = exact_config(9);
  c.selection = SelectionPolicy::round_robin;
  CHECK(run_classical_baseline(m, c).final.objective == solve_exact(m).energy);
}

TEST_CASE("configuration errors") {
  const QuboModel m(30);
  CHECK_THROWS_AS(run_hybrid(m, exact_config(30)), ValidationError);
  HybridConfig c;
  CHECK_THROWS_AS(run_classical_baseline(m, c), ValidationError);
  c.q = 0;
  CHECK_THROWS_AS(run_hybrid(m, c), ValidationError);
  CHECK_THROWS_AS(parse_selection_policy("greedy"), ValidationError);
  CHECK(parse_init_policy("greedy") == InitPolicy::greedy);
}

TEST_CASE("failed subsolves count as stalled iterations") {
  HybridConfig c;
  c.q = 2;
  c.patience = 2;
  c.subsolver.kind = SubSolverKind::external;
  c.subsolver.external_command = "/nonexistent/backend";
  const auto run = run_hybrid(QuboModel(4, 1.0), c);
  CHECK(run.termination == Termination::patience);
  REQUIRE(run.iterations.size() == 2);
  CHECK(run.iterations[0].failed);
  CHECK(run.final.objective == 1.0);
}

TEST_CASE("direct solve") {
  const auto m = build_qubo(generate_instance(3, 3, 2, 2));
  SubSolverConfig s;
  s.kind = SubSolverKind::exact;
  const auto run = run_direct(m, s);
  CHECK(run.final.objective == solve_exact(m).energy);
  CHECK(run.iterations.size() == 1);
  CHECK(run_direct(QuboModel(4, 3.0), s).final.objective == 3.0);
}

TEST_CASE("trajectory csv") {
  const auto run = run_hybrid(QuboModel(2, 1.0), exact_config(2));
  const auto csv = trajectory_to_csv(run);
  CHECK(csv.rfind("iteration,objective_before,objective_after,accepted,num_active,subsolver_evals\n", 0) == 0);
  CHECK(csv.find("0,1,1,0,2,") != std::string::npos);
}

TEST_CASE("comparison report") {
  const auto m = build_qubo(generate_instance(4, 4, 2, 1));
  CompareOptions o;
  o.seeds = {0, 1, 2};
  o.budget = 20'000;
  o.q = 6;
  o.subproblem_sweeps = 50;
  const auto report = compare_methods(m, o);
  REQUIRE(report.rows.size() == 4);
  for (std::size_t k = 1; k < report.rows.size(); ++k) CHECK(report.rows[k - 1].median <= report.rows[k].median);
  for (const auto& row : report.rows) {
    CHECK(row.finals.size() == 3);
    for (auto e : row.evaluations) CHECK(e <= o.budget + o.q * o.subproblem_sweeps);
  }
  CHECK(report_to_json(report) == report_to_json(compare_methods(m, o)));

  o.seeds = {4};
  o.methods = {kMethodHybrid};
  CHECK(compare_methods(m, o).rows.size() == 1);
  o.methods = {"oracle"};
  CHECK_THROWS_AS(compare_methods(m, o), ValidationError);
  CHECK(median({3, 1, 2, 10}) == 2.5);
}
