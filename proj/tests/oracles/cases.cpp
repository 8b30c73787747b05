#include "cases.hpp"

#include <array>
#include <sstream>

#include "ira/memory/action_buffer.hpp"
#include "ira/memory/knn.hpp"
#include "oracles.hpp"

namespace ira::oracle {

namespace {

using numerics::Rng;
using numerics::Vector;

double draw_coord(bool grid, Rng& rng) {
  if (grid) return -1.0 + 0.5 * static_cast<double>(rng.uniform_index(5));
  return rng.uniform(-1.0, 1.0);
}

}  // namespace

CaseResult knn_case(Rng& rng) {
  static constexpr std::array<memory::Metric, 3> metrics{memory::Metric::l1, memory::Metric::l2,
                                                         memory::Metric::linf};
  const int dim = 1 + static_cast<int>(rng.uniform_index(4));
  const std::size_t pushes = 1 + rng.uniform_index(1000);
  const bool wrap = rng.uniform() < 0.3;
  const std::size_t capacity = wrap ? 1 + rng.uniform_index(pushes) : pushes;
  const bool grid = rng.uniform() < 0.5;
  const std::size_t k = 1 + rng.uniform_index(20);
  const auto metric = metrics[rng.uniform_index(3)];

  memory::ActionBuffer buffer(capacity, dim);
  Rows all;
  for (std::size_t i = 0; i < pushes; ++i) {
    Vector a(dim);
    Row r(static_cast<std::size_t>(dim));
    for (int j = 0; j < dim; ++j) r[static_cast<std::size_t>(j)] = a(j) = draw_coord(grid, rng);
    buffer.push(a);
    all.push_back(r);
  }
  const Rows retained(all.end() - static_cast<std::ptrdiff_t>(buffer.size()), all.end());
  Vector q(dim);
  Row qr(static_cast<std::size_t>(dim));
  for (int j = 0; j < dim; ++j) qr[static_cast<std::size_t>(j)] = q(j) = draw_coord(grid, rng);

  const auto got = memory::knn(q, buffer, k, metric);
  const auto want = naive_knn(qr, retained, k, metric);
  const std::uint64_t first_sequence = pushes - buffer.size();

  CaseResult res;
  std::ostringstream msg;
  if (got.size() != want.size()) {
    msg << "size " << got.size() << " vs " << want.size();
    res.ok = false;
  }
  for (std::size_t i = 0; res.ok && i < want.size(); ++i) {
    const auto& n = got.candidates[i];
    const std::size_t age = want[i];
    const double d = naive_distance(metric, qr, retained[age]);
    bool same = n.sequence == first_sequence + age && n.distance == d;
    for (int j = 0; same && j < dim; ++j) same = n.action(j) == retained[age][static_cast<std::size_t>(j)];
    if (!same) {
      msg << "rank " << i << ": got seq " << n.sequence << " d=" << n.distance << ", want seq "
          << first_sequence + age << " d=" << d << " (metric " << memory::to_string(metric) << ", k " << k
          << ", size " << buffer.size() << ")";
      res.ok = false;
    }
  }
  res.detail = msg.str();
  return res;
}

CaseResult rank_case(Rng& rng) {
  const int state_dim = 1 + static_cast<int>(rng.uniform_index(4));
  const int action_dim = 1 + static_cast<int>(rng.uniform_index(3));
  const std::size_t n = 2 + rng.uniform_index(9);
  const std::size_t hidden = 8 + rng.uniform_index(25);
  const std::array<std::size_t, 4> sizes{static_cast<std::size_t>(state_dim + action_dim), hidden, hidden, 1};
  const std::array<numerics::Activation, 3> acts{numerics::Activation::relu, numerics::Activation::relu,
                                                 numerics::Activation::identity};
  const auto c1 = numerics::init_params(sizes, acts, rng, numerics::InitScheme::fan_in);
  const auto c2 = numerics::init_params(sizes, acts, rng, numerics::InitScheme::fan_in);

  Vector state(state_dim);
  Row sr(static_cast<std::size_t>(state_dim));
  for (int j = 0; j < state_dim; ++j) sr[static_cast<std::size_t>(j)] = state(j) = rng.uniform(-1.0, 1.0);

  memory::NeighborSet set;
  Rows cands;
  for (std::size_t i = 0; i < n; ++i) {
    Row a(static_cast<std::size_t>(action_dim));
    if (i > 0 && rng.uniform() < 0.25) {
      a = cands[rng.uniform_index(i)];  // exact duplicate of an earlier candidate
    } else {
      for (auto& x : a) x = rng.uniform(-1.0, 1.0);
    }
    memory::Neighbor nb;
    nb.action = Eigen::Map<const Vector>(a.data(), action_dim);
    nb.distance = static_cast<double>(i);
    nb.sequence = i;
    set.candidates.push_back(nb);
    cands.push_back(a);
  }
  set.query = set.candidates.front().action;

  const numerics::MlpParams* critics[] = {&c1, &c2};
  const auto got = memory::rank_by_target_q(state, set, critics);
  const auto [best, second] = brute_rank(sr, cands, {&c1, &c2});

  CaseResult res;
  if (!got) {
    res.ok = false;
    res.detail = "no ranking returned for " + std::to_string(n) + " candidates";
    return res;
  }
  for (int j = 0; j < action_dim; ++j) {
    if (got->best(j) != cands[best][static_cast<std::size_t>(j)] ||
        got->runner_up(j) != cands[second][static_cast<std::size_t>(j)]) {
      std::ostringstream msg;
      msg << "oracle picks (" << best << ", " << second << ") of " << n << " candidates; scores "
          << got->best_score << ", " << got->runner_up_score;
      res.ok = false;
      res.detail = msg.str();
      break;
    }
  }
  return res;
}

}  // namespace ira::oracle
