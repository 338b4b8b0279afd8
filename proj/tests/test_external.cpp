#include <doctest.h>

#include <cstdlib>

#include "qzone/subsolvers.hpp"
#include "support/oracles.hpp"

using namespace qzone;

namespace {

SubSolverConfig backend(const std::string& mode, long long timeout_ms = 10'000) {
  SubSolverConfig c;
  c.kind = SubSolverKind::external;
  c.external_command = std::string(QZONE_TEST_BACKEND) + " " + mode;
  c.external_timeout = std::chrono::milliseconds(timeout_ms);
  return c;
}

}  // namespace

TEST_CASE("backend wrapping the exact solver matches in-process results") {
  Rng rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const auto m = oracle::random_model(rng, 1 + rng.below(10));
    const auto remote = solve(m, backend("exact"));
    const auto local = solve_exact(m);
    CHECK(remote.assignment == local.assignment);
    CHECK(remote.energy == local.energy);
  }
}

TEST_CASE("all-zero backend reports the offset") {
  QuboBuilder b(3);
  b.add_linear(0, 2).add_constant(4.25);
  const auto r = solve_external(b.build(), backend("zeros"));
  CHECK(r.assignment == Assignment{0, 0, 0});
  CHECK(r.energy == 4.25);
}

TEST_CASE("backend failures map to distinct errors") {
  const QuboModel m(3);
  CHECK_THROWS_AS(solve_external(m, backend("short")), BackendAssignmentLengthError);
  CHECK_THROWS_AS(solve_external(m, backend("garbage")), BackendResponseError);
  CHECK_THROWS_AS(solve_external(m, backend("nonbinary")), BackendResponseError);
  CHECK_THROWS_AS(solve_external(m, backend("fail")), BackendSpawnError);
  CHECK_THROWS_AS(solve_external(m, backend("sleep", 300)), BackendTimeoutError);

  auto missing = backend("exact");
  missing.external_command = "/nonexistent/qzone-backend";
  CHECK_THROWS_AS(solve_external(m, missing), BackendSpawnError);
}

TEST_CASE("command falls back to the environment") {
  auto c = backend("exact");
  c.external_command.clear();
  ::setenv("QZONE_EXTERNAL_SOLVER", (std::string(QZONE_TEST_BACKEND) + " zeros").c_str(), 1);
  CHECK(solve_external(QuboModel(2, 1.0), c).energy == 1.0);
  ::unsetenv("QZONE_EXTERNAL_SOLVER");
  CHECK_THROWS_AS(solve_external(QuboModel(2), c), BackendSpawnError);
}
