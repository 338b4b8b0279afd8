#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "qzone/qubo.hpp"

namespace qzone {

enum class SubSolverKind {
  exact,
  anneal,
  tabu,
  greedy,
  external,
  /// exact when the problem fits under the exact cap, anneal otherwise.
  automatic,
};

std::string to_string(SubSolverKind kind);
/// Accepts the names printed by to_string ("auto" for automatic).
SubSolverKind parse_subsolver_kind(const std::string& name);

struct SubSolverConfig {
  SubSolverKind kind = SubSolverKind::anneal;
  /// Sweeps for anneal, flip steps for tabu, max flips for greedy. Ignored by exact.
  std::size_t budget = 200;
  std::uint64_t seed = 0;

  /// Largest problem exact enumeration will accept.
  std::size_t exact_cap = 24;
  /// Geometric cooling ratio T <- ratio * T. The temperature steps once per
  /// sweep, or once per budget/levels sweeps when the budget exceeds the
  /// number of levels between T0 and T_min = 1e-3 T0.
  double cooling_ratio = 0.97;
  std::size_t tabu_tenure = 10;
  /// Shell command line for the external backend.
  std::string external_command;
  std::chrono::milliseconds external_timeout{300'000};
};

/// Throws ValidationError for an unusable configuration.
void validate(const SubSolverConfig& config);

struct SolveResult {
  Assignment assignment;
  double energy = 0.0;
  /// Single-flip energy evaluations (or enumerated states) actually spent.
  std::size_t evaluations = 0;
  /// Accepted moves; greedy reports its flip count here.
  std::size_t moves = 0;
};

/// Base class for solver failures that callers may recover from.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ExactCapExceeded : public SolverError {
 public:
  using SolverError::SolverError;
};

/// External backend failures; each failure mode has its own subclass.
class BackendError : public SolverError {
 public:
  using SolverError::SolverError;
};
class BackendSpawnError : public BackendError {
 public:
  using BackendError::BackendError;
};
class BackendTimeoutError : public BackendError {
 public:
  using BackendError::BackendError;
};
class BackendResponseError : public BackendError {
 public:
  using BackendError::BackendError;
};
class BackendAssignmentLengthError : public BackendError {
 public:
  using BackendError::BackendError;
};

/// Global minimizer by enumeration; ties go to the lexicographically smallest
/// bit vector with x_0 most significant.
SolveResult solve_exact(const QuboModel& model, std::size_t cap = 24);

/// Single-flip Metropolis annealing with geometric cooling. Returns best seen.
SolveResult solve_anneal(const QuboModel& model, const SubSolverConfig& config);

/// Steepest single-flip descent with tabu tenure and best-seen aspiration.
SolveResult solve_tabu(const QuboModel& model, const SubSolverConfig& config);

/// Called with the assignment and energy after every improving flip.
using DescentObserver = std::function<void(const Assignment&, double)>;

/// Repeatedly applies the most-improving flip (lowest index on ties) until
/// none improves. `max_flips` of 0 means unbounded.
SolveResult solve_greedy(const QuboModel& model, std::span<const std::uint8_t> start,
                         std::size_t max_flips = 0, const DescentObserver& observer = {});

/// Runs the configured external command with one JSON request on stdin.
/// The returned assignment is validated and its energy recomputed locally.
SolveResult solve_external(const QuboModel& model, const SubSolverConfig& config);

/// Request document sent to external backends.
std::string external_request_json(const QuboModel& model);
/// Parses a request document back into a model.
QuboModel model_from_request_json(const std::string& text);
/// Response document an external backend writes.
std::string external_response_json(const SolveResult& result);

/// Dispatches on config.kind. Greedy descends from `start` when one is given,
/// otherwise from a seeded random vector; the other kinds ignore it.
SolveResult solve(const QuboModel& model, const SubSolverConfig& config,
                  std::span<const std::uint8_t> start = {});

}  // namespace qzone
