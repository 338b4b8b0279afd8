#include "qzone/qubo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qzone {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ValidationError(std::string(what) + " coefficient is not finite");
}

void require_index(std::size_t n, Index i) {
  if (i >= n) {
    throw ValidationError("variable index " + std::to_string(i) + " out of range for " +
                          std::to_string(n) + " variables");
  }
}

// h_i + sum_j J_ij x_j, accumulated in neighbor order.
double local_field(const QuboModel& model, std::span<const std::uint8_t> x, Index i) {
  double field = model.linear(i);
  for (const auto& nb : model.neighbors(i)) {
    if (x[nb.var]) field += nb.value;
  }
  return field;
}

}  // namespace

QuboModel::QuboModel(std::size_t num_vars, double constant)
    : linear_(num_vars, 0.0), constant_(constant) {
  require_finite(constant, "constant");
  index_neighbors();
}

double QuboModel::coupling(Index i, Index j) const {
  require_index(num_vars(), i);
  require_index(num_vars(), j);
  if (i == j) return 0.0;
  if (i > j) std::swap(i, j);
  for (const auto& nb : neighbors(i)) {
    if (nb.var == j) return nb.value;
  }
  return 0.0;
}

void QuboModel::index_neighbors() {
  const std::size_t n = linear_.size();
  offsets_.assign(n + 1, 0);
  for (const auto& c : couplings_) {
    ++offsets_[c.i + 1];
    ++offsets_[c.j + 1];
  }
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
  neighbors_.resize(offsets_[n]);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  // couplings_ is sorted by (i, j), so each row's neighbor list ends up sorted
  // when lower-index partners are emitted first.
  for (const auto& c : couplings_) neighbors_[cursor[c.j]++] = {c.i, c.value};
  for (const auto& c : couplings_) neighbors_[cursor[c.i]++] = {c.j, c.value};
}

QuboBuilder::QuboBuilder(std::size_t num_vars) : linear_(num_vars, 0.0) {}

QuboBuilder& QuboBuilder::add_linear(Index i, double value) {
  require_index(linear_.size(), i);
  require_finite(value, "linear");
  linear_[i] += value;
  return *this;
}

QuboBuilder& QuboBuilder::add_quadratic(Index i, Index j, double value) {
  require_index(linear_.size(), i);
  require_index(linear_.size(), j);
  require_finite(value, "quadratic");
  if (i == j) {
    // x_i^2 = x_i for binary variables.
    linear_[i] += value;
    return *this;
  }
  if (i > j) std::swap(i, j);
  quadratic_[{i, j}] += value;
  return *this;
}

QuboBuilder& QuboBuilder::add_constant(double value) {
  require_finite(value, "constant");
  constant_ += value;
  return *this;
}

QuboBuilder& QuboBuilder::add_model(const QuboModel& other) {
  if (other.num_vars() != linear_.size()) {
    throw ValidationError("cannot add a model over " + std::to_string(other.num_vars()) +
                          " variables to one over " + std::to_string(linear_.size()));
  }
  for (std::size_t i = 0; i < linear_.size(); ++i) linear_[i] += other.linear()[i];
  for (const auto& c : other.couplings()) quadratic_[{c.i, c.j}] += c.value;
  constant_ += other.constant();
  return *this;
}

QuboModel QuboBuilder::build() const {
  QuboModel model;
  model.linear_ = linear_;
  for (double h : linear_) require_finite(h, "linear");
  require_finite(constant_, "constant");
  model.constant_ = constant_;
  model.couplings_.reserve(quadratic_.size());
  for (const auto& [key, value] : quadratic_) {
    require_finite(value, "quadratic");
    if (value == 0.0) continue;
    model.couplings_.push_back({key.first, key.second, value});
  }
  model.index_neighbors();
  return model;
}

QuboModel operator+(const QuboModel& a, const QuboModel& b) {
  QuboBuilder builder(a.num_vars());
  builder.add_model(a).add_model(b);
  return builder.build();
}

void check_assignment(const QuboModel& model, std::span<const std::uint8_t> x) {
  if (x.size() != model.num_vars()) {
    throw ValidationError("assignment has " + std::to_string(x.size()) +
                          " entries but the model has " + std::to_string(model.num_vars()) +
                          " variables");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 1) {
      throw ValidationError("assignment entry " + std::to_string(i) + " is not binary");
    }
  }
}

double evaluate(const QuboModel& model, std::span<const std::uint8_t> x) {
  check_assignment(model, x);
  double energy = 0.0;
  const auto h = model.linear();
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (x[i]) energy += h[i];
  }
  for (const auto& c : model.couplings()) {
    if (x[c.i] && x[c.j]) energy += c.value;
  }
  return energy + model.constant();
}

double delta_flip(const QuboModel& model, std::span<const std::uint8_t> x, Index i) {
  check_assignment(model, x);
  require_index(model.num_vars(), i);
  const double field = local_field(model, x, i);
  return x[i] ? -field : field;
}

std::vector<double> impact_vector(const QuboModel& model, std::span<const std::uint8_t> x) {
  check_assignment(model, x);
  std::vector<double> impacts(model.num_vars());
  for (Index i = 0; i < impacts.size(); ++i) {
    const double field = local_field(model, x, i);
    impacts[i] = x[i] ? -field : field;
  }
  return impacts;
}

Assignment flip(std::span<const std::uint8_t> x, Index i) {
  require_index(x.size(), i);
  Assignment out(x.begin(), x.end());
  out[i] ^= 1;
  return out;
}

QuboModel from_symmetric_matrix(const std::vector<std::vector<double>>& q, double constant) {
  const std::size_t n = q.size();
  for (std::size_t r = 0; r < n; ++r) {
    if (q[r].size() != n) {
      throw ValidationError("matrix row " + std::to_string(r) + " has " +
                            std::to_string(q[r].size()) + " entries; expected " +
                            std::to_string(n));
    }
  }
  constexpr double kSymmetryTol = 1e-9;
  QuboBuilder builder(n);
  builder.add_constant(constant);
  for (Index i = 0; i < n; ++i) {
    builder.add_linear(i, q[i][i]);
    for (Index j = i + 1; j < n; ++j) {
      const double scale = std::max({1.0, std::abs(q[i][j]), std::abs(q[j][i])});
      if (std::abs(q[i][j] - q[j][i]) > kSymmetryTol * scale) {
        throw ValidationError("matrix is not symmetric at (" + std::to_string(i) + ", " +
                              std::to_string(j) + ")");
      }
      builder.add_quadratic(i, j, q[i][j] + q[j][i]);
    }
  }
  return builder.build();
}

std::vector<std::vector<double>> to_symmetric_matrix(const QuboModel& model) {
  const std::size_t n = model.num_vars();
  std::vector<std::vector<double>> q(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) q[i][i] = model.linear()[i];
  for (const auto& c : model.couplings()) {
    q[c.i][c.j] = 0.5 * c.value;
    q[c.j][c.i] = 0.5 * c.value;
  }
  return q;
}

}  // namespace qzone
