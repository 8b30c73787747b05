#include "ira/memory/knn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "ira/error.hpp"

namespace ira::memory {

namespace {

constexpr std::size_t kBlock = 512;

// Sorted bounded list of the best (distance, slot) pairs seen so far. The scan
// visits slots oldest-first, so inserting after equal distances keeps ties in
// age order.
class TopK {
 public:
  explicit TopK(std::size_t k) : k_(k) {
    distance_.reserve(k);
    slot_.reserve(k);
  }

  double threshold() const {
    return distance_.size() < k_ ? std::numeric_limits<double>::infinity() : distance_.back();
  }

  void offer(double d, std::size_t slot) {
    if (distance_.size() == k_) {
      if (!(d < distance_.back())) return;
      distance_.pop_back();
      slot_.pop_back();
    }
    const auto pos = std::upper_bound(distance_.begin(), distance_.end(), d) - distance_.begin();
    distance_.insert(distance_.begin() + pos, d);
    slot_.insert(slot_.begin() + pos, slot);
  }

  const std::vector<double>& distances() const { return distance_; }
  const std::vector<std::size_t>& slots() const { return slot_; }

 private:
  std::size_t k_;
  std::vector<double> distance_;
  std::vector<std::size_t> slot_;
};

void block_distances(Metric metric, const double* query, const ActionBuffer& buffer,
                     std::size_t begin, std::size_t count, double* out) {
  const int dim = buffer.action_dim();
  std::fill_n(out, count, 0.0);
  for (int j = 0; j < dim; ++j) {
    const double q = query[j];
    const double* col = buffer.column(j) + begin;
    switch (metric) {
      case Metric::linf:
        for (std::size_t e = 0; e < count; ++e) out[e] = std::max(out[e], std::abs(q - col[e]));
        break;
      case Metric::l1:
        for (std::size_t e = 0; e < count; ++e) out[e] += std::abs(q - col[e]);
        break;
      case Metric::l2:
        for (std::size_t e = 0; e < count; ++e) {
          const double diff = q - col[e];
          out[e] += diff * diff;
        }
        break;
    }
  }
  if (metric == Metric::l2) {
    for (std::size_t e = 0; e < count; ++e) out[e] = std::sqrt(out[e]);
  }
}

}  // namespace

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::l1:
      return "l1";
    case Metric::l2:
      return "l2";
    case Metric::linf:
      return "linf";
  }
  return "unknown";
}

Metric parse_metric(std::string_view text) {
  if (text == "l1") return Metric::l1;
  if (text == "l2") return Metric::l2;
  if (text == "linf") return Metric::linf;
  throw ConfigError("unknown distance metric '" + std::string(text) + "'");
}

double action_distance(Metric metric, const double* a, const double* b, std::size_t dim) {
  double acc = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    const double diff = a[j] - b[j];
    switch (metric) {
      case Metric::linf:
        acc = std::max(acc, std::abs(diff));
        break;
      case Metric::l1:
        acc += std::abs(diff);
        break;
      case Metric::l2:
        acc += diff * diff;
        break;
    }
  }
  return metric == Metric::l2 ? std::sqrt(acc) : acc;
}

NeighborSet knn(const Vector& query, const ActionBuffer& buffer, std::size_t k, Metric metric) {
  if (buffer.empty()) throw EmptyBufferError("knn: action buffer is empty, no retrospect available");
  if (k == 0) throw ConfigError("knn: k must be at least 1");
  if (query.size() != buffer.action_dim()) {
    throw DimensionError("knn: query has " + std::to_string(query.size()) + " entries, buffer holds " +
                         std::to_string(buffer.action_dim()) + "-dimensional actions");
  }

  TopK top(std::min(k, buffer.size()));
  std::array<double, kBlock> dist{};
  for (const auto& range : buffer.slots_by_age()) {
    for (std::size_t begin = range.begin; begin < range.end; begin += kBlock) {
      const std::size_t count = std::min(kBlock, range.end - begin);
      block_distances(metric, query.data(), buffer, begin, count, dist.data());
      double threshold = top.threshold();
      for (std::size_t e = 0; e < count; ++e) {
        if (dist[e] < threshold) {
          top.offer(dist[e], begin + e);
          threshold = top.threshold();
        }
      }
    }
  }

  NeighborSet out;
  out.query = query;
  out.metric = metric;
  out.candidates.reserve(top.slots().size());
  for (std::size_t i = 0; i < top.slots().size(); ++i) {
    const std::size_t slot = top.slots()[i];
    out.candidates.push_back(
        Neighbor{buffer.action_in_slot(slot), top.distances()[i], buffer.sequence_in_slot(slot)});
  }
  return out;
}

std::vector<NeighborSet> knn_batch(const Matrix& queries, const ActionBuffer& buffer, std::size_t k,
                                   Metric metric) {
  std::vector<NeighborSet> out;
  out.reserve(static_cast<std::size_t>(queries.rows()));
  for (Eigen::Index i = 0; i < queries.rows(); ++i) {
    out.push_back(knn(queries.row(i).transpose(), buffer, k, metric));
  }
  return out;
}

namespace {

std::optional<RankedActions> pick_top_two(const NeighborSet& neighbors, const double* scores) {
  const std::size_t n = neighbors.size();
  if (n < 2) return std::nullopt;
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  std::size_t second = best == 0 ? 1 : 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == best) continue;
    if (scores[i] > scores[second]) second = i;
  }
  return RankedActions{neighbors.candidates[best].action, neighbors.candidates[second].action,
                       scores[best], scores[second]};
}

}  // namespace

std::vector<std::optional<RankedActions>> rank_batch(
    const Matrix& states, const std::vector<NeighborSet>& neighbors,
    std::span<const MlpParams* const> target_critics) {
  if (target_critics.empty()) throw ConfigError("rank_by_target_q: no target critics given");
  if (static_cast<std::size_t>(states.rows()) != neighbors.size()) {
    throw DimensionError("rank_by_target_q: " + std::to_string(states.rows()) + " states but " +
                         std::to_string(neighbors.size()) + " neighbor sets");
  }
  const Eigen::Index state_dim = states.cols();
  Eigen::Index action_dim = 0;
  std::size_t total = 0;
  for (const auto& set : neighbors) {
    total += set.size();
    if (!set.candidates.empty()) action_dim = set.candidates.front().action.size();
  }

  std::vector<std::optional<RankedActions>> out(neighbors.size());
  if (total == 0) return out;

  Matrix inputs(static_cast<Eigen::Index>(total), state_dim + action_dim);
  Eigen::Index row = 0;
  for (std::size_t i = 0; i < neighbors.size(); ++i) {
    for (const auto& cand : neighbors[i].candidates) {
      if (cand.action.size() != action_dim) throw DimensionError("rank_by_target_q: mixed action sizes");
      inputs.row(row).head(state_dim) = states.row(static_cast<Eigen::Index>(i));
      inputs.row(row).tail(action_dim) = cand.action.transpose();
      ++row;
    }
  }

  Vector scores = numerics::mlp_predict(*target_critics[0], inputs).col(0);
  for (std::size_t c = 1; c < target_critics.size(); ++c) {
    scores = scores.cwiseMin(Vector(numerics::mlp_predict(*target_critics[c], inputs).col(0)));
  }

  // Batched products round a row differently depending on where it sits in
  // the batch, so repeated actions copy the score of their first occurrence
  // to keep exact ties resolved by neighbor order.
  std::size_t offset = 0;
  for (const auto& set : neighbors) {
    const auto& cands = set.candidates;
    for (std::size_t j = 1; j < cands.size(); ++j) {
      for (std::size_t first = 0; first < j; ++first) {
        if (cands[first].action == cands[j].action) {
          scores(static_cast<Eigen::Index>(offset + j)) = scores(static_cast<Eigen::Index>(offset + first));
          break;
        }
      }
    }
    offset += cands.size();
  }

  offset = 0;
  for (std::size_t i = 0; i < neighbors.size(); ++i) {
    out[i] = pick_top_two(neighbors[i], scores.data() + offset);
    offset += neighbors[i].size();
  }
  return out;
}

std::optional<RankedActions> rank_by_target_q(const Vector& state, const NeighborSet& neighbors,
                                              std::span<const MlpParams* const> target_critics) {
  Matrix states(1, state.size());
  states.row(0) = state.transpose();
  return rank_batch(states, {neighbors}, target_critics).front();
}

}  // namespace ira::memory
