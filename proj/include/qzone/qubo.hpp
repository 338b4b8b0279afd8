#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qzone {

using Index = std::uint32_t;

/// Raised when inputs violate a documented precondition or invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A binary configuration x over all decision variables.
using Assignment = std::vector<std::uint8_t>;

struct Coupling {
  Index i;
  Index j;
  double value;

  friend bool operator==(const Coupling&, const Coupling&) = default;
};

/// Quadratic unconstrained binary model in canonical form
///
///   H(x) = sum_i h_i x_i + sum_{i<j} J_ij x_i x_j + C.
///
/// The symmetric-matrix form x^T Q x + C maps onto it via h_i = Q_ii and
/// J_ij = Q_ij + Q_ji. Models are immutable; use QuboBuilder to assemble one.
class QuboModel {
 public:
  QuboModel() = default;

  /// Zero model over `num_vars` variables with offset `constant`.
  explicit QuboModel(std::size_t num_vars, double constant = 0.0);

  std::size_t num_vars() const { return linear_.size(); }
  double constant() const { return constant_; }
  double linear(Index i) const { return linear_.at(i); }
  std::span<const double> linear() const { return linear_; }

  /// Couplings sorted by (i, j) with i < j.
  std::span<const Coupling> couplings() const { return couplings_; }
  std::size_t num_couplings() const { return couplings_.size(); }

  /// J_ij for either index order; 0 when the pair is absent.
  double coupling(Index i, Index j) const;

  struct Neighbor {
    Index var;
    double value;
  };
  /// Couplings touching `i`, ordered by neighbor index.
  std::span<const Neighbor> neighbors(Index i) const {
    return {neighbors_.data() + offsets_[i], neighbors_.data() + offsets_[i + 1]};
  }

  friend bool operator==(const QuboModel& a, const QuboModel& b) {
    return a.linear_ == b.linear_ && a.couplings_ == b.couplings_ &&
           a.constant_ == b.constant_;
  }

 private:
  friend class QuboBuilder;

  void index_neighbors();

  std::vector<double> linear_;
  std::vector<Coupling> couplings_;
  double constant_ = 0.0;
  // CSR adjacency derived from couplings_.
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> neighbors_;
};

/// Accumulates coefficients; repeated terms for the same pair are summed.
class QuboBuilder {
 public:
  explicit QuboBuilder(std::size_t num_vars);

  QuboBuilder& add_linear(Index i, double value);
  /// Order of i and j is irrelevant; i == j folds into the linear term.
  QuboBuilder& add_quadratic(Index i, Index j, double value);
  QuboBuilder& add_constant(double value);
  /// Adds every coefficient of `other`, which must have the same size.
  QuboBuilder& add_model(const QuboModel& other);

  /// Validates finiteness and drops couplings that summed to exactly zero.
  QuboModel build() const;

 private:
  std::vector<double> linear_;
  std::map<std::pair<Index, Index>, double> quadratic_;
  double constant_ = 0.0;
};

/// Coefficient-wise sum of two models of equal size.
QuboModel operator+(const QuboModel& a, const QuboModel& b);

double evaluate(const QuboModel& model, std::span<const std::uint8_t> x);

/// Exact change H(flip(x, i)) - H(x) = (1 - 2 x_i) (h_i + sum_j J_ij x_j).
double delta_flip(const QuboModel& model, std::span<const std::uint8_t> x, Index i);

/// delta_flip for every variable; element-wise identical to delta_flip.
std::vector<double> impact_vector(const QuboModel& model, std::span<const std::uint8_t> x);

Assignment flip(std::span<const std::uint8_t> x, Index i);

/// Builds the canonical model for x^T Q x + C. Q must be square and
/// symmetric to within 1e-9.
QuboModel from_symmetric_matrix(const std::vector<std::vector<double>>& q, double constant);

/// Inverse of from_symmetric_matrix: Q_ii = h_i, Q_ij = Q_ji = J_ij / 2.
std::vector<std::vector<double>> to_symmetric_matrix(const QuboModel& model);

/// Throws ValidationError unless x is a binary vector of the model's size.
void check_assignment(const QuboModel& model, std::span<const std::uint8_t> x);

}  // namespace qzone
