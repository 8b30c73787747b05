#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ira/memory/action_buffer.hpp"
#include "ira/numerics/mlp.hpp"

namespace ira::memory {

using numerics::Matrix;
using numerics::MlpParams;

enum class Metric { l1, l2, linf };

std::string_view to_string(Metric m);
Metric parse_metric(std::string_view text);

/// Distance between two action vectors of length `dim`. Coordinates are
/// accumulated in index order; l2 takes the square root of the summed squares.
double action_distance(Metric metric, const double* a, const double* b, std::size_t dim);

struct Neighbor {
  Vector action;
  double distance = 0.0;
  std::uint64_t sequence = 0;  // insertion number in the action buffer; smaller is older
};

/// Nearest buffered actions, ordered by (distance, age): closest first and,
/// among equal distances, oldest first.
struct NeighborSet {
  std::vector<Neighbor> candidates;
  Vector query;
  Metric metric = Metric::linf;

  std::size_t size() const { return candidates.size(); }
};

/// The min(k, size) buffered actions closest to `query`. Linear scan over the
/// whole buffer. Throws EmptyBufferError when there is nothing to retrieve.
NeighborSet knn(const Vector& query, const ActionBuffer& buffer, std::size_t k, Metric metric);

/// One knn call per row of `queries`.
std::vector<NeighborSet> knn_batch(const Matrix& queries, const ActionBuffer& buffer, std::size_t k,
                                   Metric metric);

struct RankedActions {
  Vector best;       // highest min-over-critics target value
  Vector runner_up;  // second highest
  double best_score = 0.0;
  double runner_up_score = 0.0;
};

/// Scores each candidate by the minimum over `target_critics` of Q(state, a)
/// and returns the top two; equal scores keep the neighbor order (closer
/// first). Returns nullopt when fewer than two candidates are available.
std::optional<RankedActions> rank_by_target_q(const Vector& state, const NeighborSet& neighbors,
                                              std::span<const MlpParams* const> target_critics);

/// rank_by_target_q for every row of `states` with its own neighbor set; all
/// candidates go through each critic in one batched forward pass.
std::vector<std::optional<RankedActions>> rank_batch(
    const Matrix& states, const std::vector<NeighborSet>& neighbors,
    std::span<const MlpParams* const> target_critics);

}  // namespace ira::memory
