#include "qzone/zoning.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "qzone/rng.hpp"

namespace qzone {

using json = nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw ValidationError("field '" + field + "': " + why);
}

const json& require(const json& doc, const char* field) {
  auto it = doc.find(field);
  if (it == doc.end()) fail(field, "missing");
  return *it;
}

std::size_t require_count(const json& doc, const char* field) {
  const json& v = require(doc, field);
  if (!v.is_number_unsigned()) fail(field, "expected a non-negative integer");
  return v.get<std::size_t>();
}

double require_number(const json& v, const std::string& field) {
  if (!v.is_number()) fail(field, "expected a number");
  return v.get<double>();
}

void check_version(const json& doc) {
  const json& v = require(doc, "format_version");
  if (!v.is_number_integer() || v.get<int>() != kFormatVersion) {
    fail("format_version", "unsupported version " + v.dump() + " (expected " +
                               std::to_string(kFormatVersion) + ")");
  }
}

json parse(const std::string& text) {
  try {
    auto doc = json::parse(text);
    if (!doc.is_object()) throw ValidationError("document root must be a JSON object");
    return doc;
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

Assignment parse_assignment(const json& v, const std::string& field) {
  if (!v.is_array()) fail(field, "expected an array of 0/1 values");
  Assignment bits;
  bits.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const json& b = v[i];
    if (!b.is_number_integer() || (b.get<std::int64_t>() != 0 && b.get<std::int64_t>() != 1)) {
      fail(field + "[" + std::to_string(i) + "]", "expected 0 or 1");
    }
    bits.push_back(static_cast<std::uint8_t>(b.get<int>()));
  }
  return bits;
}

}  // namespace

void validate(const TrafficInstance& inst) {
  if (inst.rows == 0) fail("rows", "must be at least 1");
  if (inst.cols == 0) fail("cols", "must be at least 1");
  if (inst.num_attributes == 0) fail("num_attributes", "must be at least 1");
  const std::size_t n = inst.num_zones();
  if (inst.attributes.size() != n * inst.num_attributes) {
    fail("attributes", "expected " + std::to_string(n) + " x " +
                           std::to_string(inst.num_attributes) + " entries, found " +
                           std::to_string(inst.attributes.size()));
  }
  for (std::size_t idx = 0; idx < inst.attributes.size(); ++idx) {
    const double a = inst.attributes[idx];
    if (!std::isfinite(a) || a < 0.0) {
      fail("attributes[" + std::to_string(idx / inst.num_attributes) + "][" +
               std::to_string(idx % inst.num_attributes) + "]",
           "must be finite and non-negative");
    }
  }
  std::set<std::pair<Index, Index>> seen;
  for (std::size_t e = 0; e < inst.edges.size(); ++e) {
    const Edge& edge = inst.edges[e];
    const std::string where = "edges[" + std::to_string(e) + "]";
    if (edge.i >= edge.j) fail(where, "endpoints must satisfy i < j");
    if (edge.j >= n) fail(where, "endpoint out of range");
    if (!std::isfinite(edge.weight) || edge.weight <= 0.0) fail(where, "weight must be positive");
    if (!seen.emplace(edge.i, edge.j).second) {
      fail(where, "duplicate edge (" + std::to_string(edge.i) + ", " + std::to_string(edge.j) + ")");
    }
  }
  if (!std::isfinite(inst.lambda) || inst.lambda < 0.0) fail("lambda", "must be finite and >= 0");
}

std::vector<Edge> grid_edges(std::size_t rows, std::size_t cols, double weight) {
  std::vector<Edge> edges;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const auto z = static_cast<Index>(r * cols + c);
      if (c + 1 < cols) edges.push_back({z, z + 1, weight});
      if (r + 1 < rows) edges.push_back({z, static_cast<Index>(z + cols), weight});
    }
  }
  return edges;
}

TrafficInstance generate_instance(std::size_t rows, std::size_t cols, std::size_t num_attributes,
                                  std::uint64_t seed) {
  if (rows == 0 || cols == 0) throw ValidationError("grid dimensions must be at least 1x1");
  if (num_attributes == 0) throw ValidationError("at least one attribute is required");
  TrafficInstance inst;
  inst.rows = rows;
  inst.cols = cols;
  inst.num_attributes = num_attributes;
  inst.seed = seed;
  const std::size_t n = rows * cols;
  Rng rng(seed);
  inst.attributes.resize(n * num_attributes);
  for (double& a : inst.attributes) a = rng.uniform();
  for (std::size_t k = 0; k < num_attributes; ++k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += inst.attributes[i * num_attributes + k];
    // A draw of all zeros is not meaningfully possible; leave such a column as is.
    if (total <= 0.0) continue;
    const double scale = static_cast<double>(n) / total;
    for (std::size_t i = 0; i < n; ++i) inst.attributes[i * num_attributes + k] *= scale;
  }
  inst.edges = grid_edges(rows, cols);
  return inst;
}

std::vector<double> balance_targets(const TrafficInstance& inst) {
  std::vector<double> targets(inst.num_attributes, 0.0);
  for (std::size_t i = 0; i < inst.num_zones(); ++i) {
    for (std::size_t k = 0; k < inst.num_attributes; ++k) targets[k] += inst.attribute(i, k);
  }
  for (double& t : targets) t *= 0.5;
  return targets;
}

QuboModel build_balance_qubo(const TrafficInstance& inst) {
  const std::size_t n = inst.num_zones();
  const std::size_t m = inst.num_attributes;
  const auto targets = balance_targets(inst);
  QuboBuilder builder(n);
  for (Index i = 0; i < n; ++i) {
    double h = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double a = inst.attribute(i, k);
      h += a * a - 2.0 * targets[k] * a;
    }
    builder.add_linear(i, h);
    for (Index j = i + 1; j < n; ++j) {
      double coupling = 0.0;
      for (std::size_t k = 0; k < m; ++k) coupling += 2.0 * inst.attribute(i, k) * inst.attribute(j, k);
      builder.add_quadratic(i, j, coupling);
    }
  }
  double constant = 0.0;
  for (double t : targets) constant += t * t;
  builder.add_constant(constant);
  return builder.build();
}

QuboModel build_adjacency_qubo(const TrafficInstance& inst) {
  QuboBuilder builder(inst.num_zones());
  for (const Edge& e : inst.edges) {
    const double w = inst.lambda * e.weight;
    builder.add_linear(e.i, w);
    builder.add_linear(e.j, w);
    builder.add_quadratic(e.i, e.j, -2.0 * w);
  }
  return builder.build();
}

QuboModel build_qubo(const TrafficInstance& inst) {
  return build_balance_qubo(inst) + build_adjacency_qubo(inst);
}

std::size_t count_cut_edges(const TrafficInstance& inst, std::span<const std::uint8_t> x) {
  if (x.size() != inst.num_zones()) {
    throw ValidationError("assignment has " + std::to_string(x.size()) + " entries but the instance has " +
                          std::to_string(inst.num_zones()) + " zones");
  }
  std::size_t cut = 0;
  for (const Edge& e : inst.edges) cut += x[e.i] != x[e.j];
  return cut;
}

std::string instance_to_json(const TrafficInstance& inst) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["rows"] = inst.rows;
  doc["cols"] = inst.cols;
  doc["num_attributes"] = inst.num_attributes;
  json rows = json::array();
  for (std::size_t i = 0; i < inst.num_zones(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < inst.num_attributes; ++k) row.push_back(inst.attribute(i, k));
    rows.push_back(std::move(row));
  }
  doc["attributes"] = std::move(rows);
  json edges = json::array();
  for (const Edge& e : inst.edges) edges.push_back(json::array({e.i, e.j, e.weight}));
  doc["edges"] = std::move(edges);
  doc["lambda"] = inst.lambda;
  doc["seed"] = inst.seed ? json(*inst.seed) : json(nullptr);
  return doc.dump(1) + "\n";
}

TrafficInstance instance_from_json(const std::string& text) {
  const json doc = parse(text);
  check_version(doc);
  TrafficInstance inst;
  inst.rows = require_count(doc, "rows");
  inst.cols = require_count(doc, "cols");
  inst.num_attributes = require_count(doc, "num_attributes");
  const json& attrs = require(doc, "attributes");
  if (!attrs.is_array()) fail("attributes", "expected an array of rows");
  if (attrs.size() != inst.rows * inst.cols) {
    fail("attributes", "expected " + std::to_string(inst.rows * inst.cols) + " rows, found " +
                           std::to_string(attrs.size()));
  }
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    const json& row = attrs[i];
    const std::string where = "attributes[" + std::to_string(i) + "]";
    if (!row.is_array() || row.size() != inst.num_attributes) {
      fail(where, "expected " + std::to_string(inst.num_attributes) + " values");
    }
    for (std::size_t k = 0; k < row.size(); ++k) {
      inst.attributes.push_back(require_number(row[k], where + "[" + std::to_string(k) + "]"));
    }
  }
  const json& edges = require(doc, "edges");
  if (!edges.is_array()) fail("edges", "expected an array of [i, j, w] triples");
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const json& t = edges[e];
    const std::string where = "edges[" + std::to_string(e) + "]";
    if (!t.is_array() || t.size() != 3 || !t[0].is_number_unsigned() || !t[1].is_number_unsigned()) {
      fail(where, "expected [i, j, w] with non-negative integer endpoints");
    }
    inst.edges.push_back({t[0].get<Index>(), t[1].get<Index>(), require_number(t[2], where + "[2]")});
  }
  inst.lambda = require_number(require(doc, "lambda"), "lambda");
  if (auto it = doc.find("seed"); it != doc.end() && !it->is_null()) {
    if (!it->is_number_unsigned()) fail("seed", "expected a non-negative integer or null");
    inst.seed = it->get<std::uint64_t>();
  }
  validate(inst);
  return inst;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw ValidationError("failed writing '" + path.string() + "'");
}

void write_instance(const TrafficInstance& instance, const std::filesystem::path& path) {
  validate(instance);
  write_text_file(path, instance_to_json(instance));
}

TrafficInstance read_instance(const std::filesystem::path& path) {
  return instance_from_json(read_text_file(path));
}

std::string solution_to_json(const SolutionRecord& s) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["assignment"] = s.assignment;
  doc["objective"] = s.objective;
  doc["method"] = s.method;
  doc["seed"] = s.seed;
  doc["iterations"] = s.iterations;
  return doc.dump(1) + "\n";
}

SolutionRecord solution_from_json(const std::string& text) {
  const json doc = parse(text);
  check_version(doc);
  SolutionRecord s;
  s.assignment = parse_assignment(require(doc, "assignment"), "assignment");
  s.objective = require_number(require(doc, "objective"), "objective");
  const json& method = require(doc, "method");
  if (!method.is_string()) fail("method", "expected a string");
  s.method = method.get<std::string>();
  s.seed = require_count(doc, "seed");
  s.iterations = require_count(doc, "iterations");
  return s;
}

void write_solution(const SolutionRecord& solution, const std::filesystem::path& path) {
  write_text_file(path, solution_to_json(solution));
}

SolutionRecord read_solution(const std::filesystem::path& path) {
  return solution_from_json(read_text_file(path));
}

}  // namespace qzone
