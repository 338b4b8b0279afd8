#include <doctest.h>

#include "qzone/decomposition.hpp"
#include "support/oracles.hpp"

using namespace qzone;

namespace {

QuboModel two_var() {
  QuboBuilder b(2);
  b.add_linear(0, 1).add_linear(1, 3).add_quadratic(0, 1, -4);
  return b.build();
}

}  // namespace

TEST_CASE("active set selection") {
  const std::vector<double> impacts{5, -3, 0.5, -7};
  auto s = select_from_impacts(impacts, 2, ImpactRanking::magnitude);
  CHECK(s.indices == std::vector<Index>{0, 3});
  CHECK(s.impacts == std::vector<double>{5, -7});

  s = select_from_impacts(impacts, 2, ImpactRanking::most_negative);
  CHECK(s.indices == std::vector<Index>{1, 3});

  CHECK(select_from_impacts(impacts, 9).indices == std::vector<Index>{0, 1, 2, 3});
  const std::vector<double> flat(6, 2.0);
  for (auto r : {ImpactRanking::magnitude, ImpactRanking::most_negative}) {
    CHECK(select_from_impacts(flat, 3, r).indices == std::vector<Index>{0, 1, 2});
  }
  CHECK_THROWS_AS(select_from_impacts(impacts, 0), ValidationError);
  CHECK(parse_impact_ranking("most_negative") == ImpactRanking::most_negative);
  CHECK_THROWS_AS(parse_impact_ranking("largest"), ValidationError);
}

TEST_CASE("select_active_set ranks the impact vector") {
  const auto m = two_var();
  const auto s = select_active_set(m, Assignment{1, 1}, 1, ImpactRanking::magnitude);
  CHECK(s.indices == std::vector<Index>{0});
  CHECK(s.impacts == std::vector<double>{3});
}

TEST_CASE("subproblem with one frozen variable") {
  const auto m = two_var();
  const std::vector<Index> active{0};
  auto sub = extract_subproblem(m, Assignment{0, 1}, active);
  CHECK(sub.model.linear(0) == -3.0);
  CHECK(sub.model.constant() == 3.0);
  CHECK(evaluate(sub.model, Assignment{0}) == 3.0);
  CHECK(evaluate(sub.model, Assignment{1}) == 0.0);

  sub = extract_subproblem(m, Assignment{0, 0}, active);
  CHECK(sub.model.linear(0) == 1.0);
  CHECK(sub.model.constant() == 0.0);
}

TEST_CASE("subproblem over every variable is the model itself") {
  Rng rng(4);
  const auto m = oracle::random_model(rng, 6);
  const std::vector<Index> all{0, 1, 2, 3, 4, 5};
  const auto sub = extract_subproblem(m, oracle::random_bits(rng, 6), all);
  CHECK(sub.model == m);
}

TEST_CASE("subproblem energy equals merged global energy") {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.below(30);
    const auto m = oracle::random_model(rng, n, 0.4);
    const auto x = oracle::random_bits(rng, n);
    const auto active = select_from_impacts(impact_vector(m, x), 1 + rng.below(n), ImpactRanking::magnitude);
    const auto sub = extract_subproblem(m, x, active);
    const auto y = oracle::random_bits(rng, active.indices.size());
    CHECK(oracle::close(evaluate(sub.model, y), evaluate(m, merge_solution(x, sub, y))));
    CHECK(merge_solution(x, sub, restrict_to_active(x, sub)) == x);
  }
}

TEST_CASE("merge and extraction preconditions") {
  const QuboModel m(3);
  const std::vector<Index> middle{1};
  const auto sub = extract_subproblem(m, Assignment{0, 0, 0}, middle);
  CHECK(merge_solution(Assignment{0, 0, 0}, sub, Assignment{1}) == Assignment{0, 1, 0});
  CHECK_THROWS_AS(merge_solution(Assignment{0, 0, 0}, sub, Assignment{1, 0}), ValidationError);

  const std::vector<Index> unsorted{2, 1};
  CHECK_THROWS_AS(extract_subproblem(m, Assignment{0, 0, 0}, unsorted), ValidationError);
  const std::vector<Index> outside{3};
  CHECK_THROWS_AS(extract_subproblem(m, Assignment{0, 0, 0}, outside), ValidationError);
}
