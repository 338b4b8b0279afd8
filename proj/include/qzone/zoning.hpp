#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qzone/qubo.hpp"

namespace qzone {

struct Edge {
  Index i;
  Index j;
  double weight;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Zones on a rows x cols grid with m workload attributes per zone.
///
/// Zone index is r * cols + c. Region labels: 1 = A, 0 = B.
struct TrafficInstance {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t num_attributes = 0;
  /// Row-major n x m; attributes[i * num_attributes + k] is A_ik.
  std::vector<double> attributes;
  /// i < j, no duplicate pairs.
  std::vector<Edge> edges;
  double lambda = 1.0;
  std::optional<std::uint64_t> seed;

  std::size_t num_zones() const { return rows * cols; }
  double attribute(std::size_t zone, std::size_t k) const {
    return attributes[zone * num_attributes + k];
  }

  friend bool operator==(const TrafficInstance&, const TrafficInstance&) = default;
};

/// Throws ValidationError naming the offending field.
void validate(const TrafficInstance& instance);

/// Uniform [0,1) attributes scaled to unit column mean, 4-neighbor grid
/// edges with unit weight, lambda = 1.
TrafficInstance generate_instance(std::size_t rows, std::size_t cols, std::size_t num_attributes,
                                  std::uint64_t seed);

/// Edges of the 4-neighbor grid graph, sorted.
std::vector<Edge> grid_edges(std::size_t rows, std::size_t cols, double weight = 1.0);

/// T_k = half the system total of attribute k.
std::vector<double> balance_targets(const TrafficInstance& instance);

/// sum_k (sum_i A_ik x_i - T_k)^2 expanded into canonical form (dense).
QuboModel build_balance_qubo(const TrafficInstance& instance);

/// lambda * sum_edges W_ij (x_i - x_j)^2, each unordered edge counted once.
QuboModel build_adjacency_qubo(const TrafficInstance& instance);

/// Balance plus spatial-coherence objective.
QuboModel build_qubo(const TrafficInstance& instance);

/// Number of edges whose endpoints are assigned to different regions.
std::size_t count_cut_edges(const TrafficInstance& instance, std::span<const std::uint8_t> x);

struct Partition {
  Assignment assignment;
  double objective = 0.0;
};

/// Solution file payload.
struct SolutionRecord {
  Assignment assignment;
  double objective = 0.0;
  std::string method;
  std::uint64_t seed = 0;
  std::size_t iterations = 0;

  friend bool operator==(const SolutionRecord&, const SolutionRecord&) = default;
};

inline constexpr int kFormatVersion = 1;

std::string instance_to_json(const TrafficInstance& instance);
TrafficInstance instance_from_json(const std::string& text);
void write_instance(const TrafficInstance& instance, const std::filesystem::path& path);
TrafficInstance read_instance(const std::filesystem::path& path);

std::string solution_to_json(const SolutionRecord& solution);
SolutionRecord solution_from_json(const std::string& text);
void write_solution(const SolutionRecord& solution, const std::filesystem::path& path);
SolutionRecord read_solution(const std::filesystem::path& path);

/// Whole-file helpers shared by the readers and writers.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace qzone
