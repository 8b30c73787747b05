#include <gtest/gtest.h>

#include <array>
#include <bit>
#include <cmath>
#include <tuple>
#include <unistd.h>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cases.hpp"
#include "ira/error.hpp"
#include "ira/memory/action_buffer.hpp"
#include "ira/memory/dump.hpp"
#include "ira/memory/knn.hpp"
#include "ira/memory/replay_buffer.hpp"
#include "oracles.hpp"

using namespace ira;
using namespace ira::memory;
namespace fs = std::filesystem;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

Transition make_transition(double tag) {
  return {vec({tag, tag + 0.5}), vec({-tag}), tag * 10.0, vec({tag + 1.0, tag + 1.5}), false, tag > 1.5};
}

fs::path temp_path(const std::string& name) {
  return fs::temp_directory_path() / ("ira_test_" + std::to_string(::getpid()) + "_" + name);
}

MlpParams constant_critic(int in_dim, double value) {
  // Zero weights everywhere; the head bias carries the constant.
  MlpParams p;
  for (auto [out, in, act] : std::array<std::tuple<int, int, numerics::Activation>, 2>{
           {{4, in_dim, numerics::Activation::relu}, {1, 4, numerics::Activation::identity}}}) {
    numerics::DenseLayer l;
    l.weight = numerics::Matrix::Zero(out, in);
    l.bias = numerics::RowVector::Zero(out);
    l.activation = act;
    p.layers.push_back(l);
  }
  p.layers.back().bias(0) = value;
  return p;
}

}  // namespace

TEST(ReplayBuffer, RingKeepsNewest) {
  ReplayBuffer buf(2, 2, 1);
  buf.push(make_transition(1.0));
  buf.push(make_transition(2.0));
  buf.push(make_transition(3.0));
  EXPECT_EQ(buf.size(), 2u);
  EXPECT_EQ(buf.at(0).reward, 20.0);
  EXPECT_EQ(buf.at(1).reward, 30.0);
}

TEST(ReplayBuffer, CapacityPlusMKeepsLastCapacity) {
  const std::size_t cap = 7;
  ReplayBuffer buf(cap, 2, 1);
  for (int i = 0; i < 20; ++i) buf.push(make_transition(i));
  ASSERT_EQ(buf.size(), cap);
  for (std::size_t age = 0; age < cap; ++age) EXPECT_EQ(buf.at(age).reward, 10.0 * (13 + static_cast<double>(age)));
}

TEST(ReplayBuffer, TransitionRoundTrip) {
  ReplayBuffer buf(4, 2, 1);
  const auto t = make_transition(2.0);
  buf.push(t);
  const auto back = buf.at(0);
  EXPECT_EQ(back.state, t.state);
  EXPECT_EQ(back.action, t.action);
  EXPECT_EQ(back.reward, t.reward);
  EXPECT_EQ(back.next_state, t.next_state);
  EXPECT_EQ(back.terminated, t.terminated);
  EXPECT_EQ(back.truncated, t.truncated);
}

TEST(ReplayBuffer, SingleItemSampledRepeatedly) {
  ReplayBuffer buf(10, 2, 1);
  buf.push(make_transition(1.0));
  Rng rng(3);
  const auto batch = buf.sample(4, rng);
  ASSERT_EQ(batch.size(), 4);
  for (Eigen::Index i = 0; i < 4; ++i) EXPECT_EQ(batch.rewards(i), 10.0);
}

TEST(ReplayBuffer, SamplingDeterministic) {
  ReplayBuffer buf(100, 2, 1);
  for (int i = 0; i < 50; ++i) buf.push(make_transition(i));
  Rng a(5), b(5);
  EXPECT_EQ(buf.sample(32, a).rewards, buf.sample(32, b).rewards);
}

TEST(ReplayBuffer, EmptySampleThrows) {
  ReplayBuffer buf(10, 2, 1);
  Rng rng(1);
  EXPECT_THROW(buf.sample(1, rng), EmptyBufferError);
}

TEST(ReplayBuffer, WrongDimensionsThrow) {
  ReplayBuffer buf(10, 2, 1);
  auto t = make_transition(1.0);
  t.state = vec({1.0});
  EXPECT_THROW(buf.push(t), DimensionError);
}

TEST(ReplayBuffer, ChiSquareUniformity) {
  ReplayBuffer buf(10, 2, 1);
  for (int i = 0; i < 10; ++i) buf.push(make_transition(i));
  Rng rng(2024);
  std::array<double, 10> counts{};
  const int draws = 100000;
  const auto batch = buf.sample(draws, rng);
  for (Eigen::Index i = 0; i < batch.size(); ++i) counts[static_cast<std::size_t>(batch.rewards(i) / 10.0)] += 1.0;
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - draws / 10.0) * (c - draws / 10.0) / (draws / 10.0);
  EXPECT_LT(chi2, 21.666);  // 0.99 quantile of chi-square with 9 degrees of freedom
}

TEST(ActionBuffer, RingSemanticsAndSequence) {
  ActionBuffer buf(3, 1);
  for (int i = 0; i < 5; ++i) buf.push(vec({static_cast<double>(i)}));
  ASSERT_EQ(buf.size(), 3u);
  for (std::size_t age = 0; age < 3; ++age) {
    EXPECT_EQ(buf.at(age)(0), 2.0 + static_cast<double>(age));
    EXPECT_EQ(buf.sequence_at(age), 2u + age);
  }
}

TEST(ActionBuffer, StoresExactValues) {
  ActionBuffer buf(4, 2);
  const Vector a = vec({0.1 + 0.2, -1.0 / 3.0});
  buf.push(a);
  EXPECT_EQ(buf.at(0), a);
  EXPECT_THROW(buf.push(vec({1.0})), DimensionError);
}

TEST(Knn, ChebyshevExample) {
  ActionBuffer buf(10, 2);
  buf.push(vec({0.0, 0.0}));
  buf.push(vec({1.0, 1.0}));
  buf.push(vec({0.2, 0.9}));
  const auto set = knn(vec({0.0, 1.0}), buf, 1, Metric::linf);
  ASSERT_EQ(set.size(), 1u);
  EXPECT_EQ(set.candidates[0].action, vec({0.2, 0.9}));
  EXPECT_DOUBLE_EQ(set.candidates[0].distance, 0.2);
}

TEST(Knn, ExactMatchFirst) {
  ActionBuffer buf(10, 2);
  buf.push(vec({0.5, 0.5}));
  buf.push(vec({0.3, -0.2}));
  buf.push(vec({-0.4, 0.1}));
  for (Metric m : {Metric::l1, Metric::l2, Metric::linf}) {
    const auto set = knn(vec({0.3, -0.2}), buf, 2, m);
    EXPECT_EQ(set.candidates[0].action, vec({0.3, -0.2}));
    EXPECT_EQ(set.candidates[0].distance, 0.0);
  }
}

TEST(Knn, KAtLeastSizeReturnsWholeBufferSorted) {
  ActionBuffer buf(10, 1);
  for (double x : {0.9, -0.3, 0.1, 0.5}) buf.push(vec({x}));
  const auto set = knn(vec({0.0}), buf, 50, Metric::l1);
  ASSERT_EQ(set.size(), 4u);
  for (std::size_t i = 1; i < set.size(); ++i) EXPECT_LE(set.candidates[i - 1].distance, set.candidates[i].distance);
  EXPECT_EQ(set.candidates[0].action(0), 0.1);
}

TEST(Knn, TiesResolvedOldestFirst) {
  ActionBuffer buf(10, 1);
  for (double x : {0.5, -0.5, 0.5, -0.5}) buf.push(vec({x}));
  const auto set = knn(vec({0.0}), buf, 4, Metric::linf);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(set.candidates[i].sequence, i);
}

TEST(Knn, ErrorsAndNoRetrospectMessage) {
  ActionBuffer buf(10, 2);
  try {
    knn(vec({0.0, 0.0}), buf, 1, Metric::linf);
    FAIL() << "expected EmptyBufferError";
  } catch (const EmptyBufferError& e) {
    EXPECT_NE(std::string(e.what()).find("no retrospect available"), std::string::npos);
  }
  buf.push(vec({1.0, 1.0}));
  EXPECT_THROW(knn(vec({0.0, 0.0}), buf, 0, Metric::linf), ConfigError);
  EXPECT_THROW(knn(vec({0.0}), buf, 1, Metric::linf), DimensionError);
}

TEST(Knn, MatchesFullSortOracle) {
  Rng rng(77);
  for (int i = 0; i < 300; ++i) {
    const auto r = oracle::knn_case(rng);
    ASSERT_TRUE(r.ok) << "case " << i << ": " << r.detail;
  }
}

TEST(Knn, PositiveScalingKeepsSelection) {
  Rng rng(5);
  for (Metric m : {Metric::l1, Metric::l2, Metric::linf}) {
    for (int trial = 0; trial < 20; ++trial) {
      ActionBuffer a(300, 3), b(300, 3);
      const double c = std::ldexp(1.0, static_cast<int>(rng.uniform_index(9)) - 4);
      for (int i = 0; i < 300; ++i) {
        Vector x(3);
        for (int j = 0; j < 3; ++j) x(j) = rng.uniform(-1.0, 1.0);
        a.push(x);
        b.push(c * x);
      }
      Vector q(3);
      for (int j = 0; j < 3; ++j) q(j) = rng.uniform(-1.0, 1.0);
      const auto sa = knn(q, a, 10, m);
      const auto sb = knn(c * q, b, 10, m);
      for (std::size_t i = 0; i < 10; ++i) ASSERT_EQ(sa.candidates[i].sequence, sb.candidates[i].sequence);
    }
  }
}

TEST(Knn, BatchMatchesPerRow) {
  Rng rng(9);
  ActionBuffer buf(500, 2);
  for (int i = 0; i < 700; ++i) buf.push(vec({rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)}));
  numerics::Matrix queries(6, 2);
  for (Eigen::Index i = 0; i < 6; ++i) queries.row(i) << rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0);
  const auto batch = knn_batch(queries, buf, 7, Metric::l2);
  for (Eigen::Index i = 0; i < 6; ++i) {
    const auto single = knn(queries.row(i).transpose(), buf, 7, Metric::l2);
    for (std::size_t j = 0; j < 7; ++j) EXPECT_EQ(batch[static_cast<std::size_t>(i)].candidates[j].sequence, single.candidates[j].sequence);
  }
}

TEST(Rank, TwoCandidatesByScore) {
  // Critic output = 3 + 2 * a, so a = 0 scores 3.0 and a = 1 scores 5.0.
  MlpParams critic;
  numerics::DenseLayer l;
  l.weight = numerics::Matrix{{0.0, 2.0}};
  l.bias = numerics::RowVector::Constant(1, 3.0);
  l.activation = numerics::Activation::identity;
  critic.layers.push_back(l);
  NeighborSet set;
  set.candidates.push_back({vec({0.0}), 0.0, 0});
  set.candidates.push_back({vec({1.0}), 0.1, 1});
  const MlpParams* critics[] = {&critic, &critic};
  const auto r = rank_by_target_q(vec({0.7}), set, critics);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->best, vec({1.0}));
  EXPECT_EQ(r->runner_up, vec({0.0}));
  EXPECT_EQ(r->best_score, 5.0);
  EXPECT_EQ(r->runner_up_score, 3.0);
}

TEST(Rank, UsesMinimumOverCritics) {
  MlpParams up, down;
  for (auto [p, w] : {std::pair{&up, 1.0}, std::pair{&down, -1.0}}) {
    numerics::DenseLayer l;
    l.weight = numerics::Matrix{{0.0, w}};
    l.bias = numerics::RowVector::Zero(1);
    l.activation = numerics::Activation::identity;
    p->layers.push_back(l);
  }
  NeighborSet set;
  set.candidates.push_back({vec({0.5}), 0.0, 0});
  set.candidates.push_back({vec({-0.2}), 0.1, 1});
  set.candidates.push_back({vec({0.1}), 0.2, 2});
  const MlpParams* critics[] = {&up, &down};
  // min(a, -a) = -|a|: best is the smallest magnitude.
  const auto r = rank_by_target_q(vec({0.0}), set, critics);
  EXPECT_EQ(r->best, vec({0.1}));
  EXPECT_EQ(r->runner_up, vec({-0.2}));
}

TEST(Rank, IdenticalCandidates) {
  const auto c = constant_critic(3, 1.0);
  NeighborSet set;
  for (int i = 0; i < 4; ++i) set.candidates.push_back({vec({0.2, -0.3}), 0.0, static_cast<std::uint64_t>(i)});
  const MlpParams* critics[] = {&c, &c};
  const auto r = rank_by_target_q(vec({1.0}), set, critics);
  EXPECT_EQ(r->best, vec({0.2, -0.3}));
  EXPECT_EQ(r->runner_up, vec({0.2, -0.3}));
}

TEST(Rank, TiesKeepNeighborOrder) {
  const auto c = constant_critic(2, 4.0);
  NeighborSet set;
  for (double x : {0.3, -0.6, 0.9}) set.candidates.push_back({vec({x}), std::abs(x), 0});
  const MlpParams* critics[] = {&c, &c};
  const auto r = rank_by_target_q(vec({0.0}), set, critics);
  EXPECT_EQ(r->best, vec({0.3}));
  EXPECT_EQ(r->runner_up, vec({-0.6}));
}

TEST(Rank, InsufficientRetrospect) {
  const auto c = constant_critic(2, 0.0);
  NeighborSet set;
  set.candidates.push_back({vec({0.1}), 0.0, 0});
  const MlpParams* critics[] = {&c, &c};
  EXPECT_FALSE(rank_by_target_q(vec({0.0}), set, critics));
}

TEST(Rank, MatchesBruteForceOracle) {
  Rng rng(31);
  for (int i = 0; i < 300; ++i) {
    const auto r = oracle::rank_case(rng);
    ASSERT_TRUE(r.ok) << "case " << i << ": " << r.detail;
  }
}

TEST(Rank, ConstantShiftInvariance) {
  Rng rng(12);
  const std::array<std::size_t, 4> sizes{3, 16, 16, 1};
  const std::array<numerics::Activation, 3> acts{numerics::Activation::relu, numerics::Activation::relu,
                                                 numerics::Activation::identity};
  for (int trial = 0; trial < 50; ++trial) {
    auto c1 = numerics::init_params(sizes, acts, rng, numerics::InitScheme::fan_in);
    auto c2 = numerics::init_params(sizes, acts, rng, numerics::InitScheme::fan_in);
    NeighborSet set;
    for (int i = 0; i < 8; ++i) set.candidates.push_back({vec({rng.uniform(-1.0, 1.0)}), 0.1 * i, 0});
    const Vector s = vec({rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)});
    const MlpParams* critics[] = {&c1, &c2};
    const auto before = rank_by_target_q(s, set, critics);
    c1.layers.back().bias(0) += 0.75;
    c2.layers.back().bias(0) += 0.75;
    const auto after = rank_by_target_q(s, set, critics);
    EXPECT_EQ(before->best, after->best);
    EXPECT_EQ(before->runner_up, after->runner_up);
  }
}

TEST(Dump, ActionBufferRoundTrip) {
  ActionBuffer buf(5, 2);
  for (int i = 0; i < 8; ++i) buf.push(vec({i * 0.1, -i / 3.0}));
  const auto path = temp_path("actions.bin");
  save_buffer(buf, path);
  const auto back = load_action_buffer(path);
  EXPECT_EQ(back.capacity(), 5u);
  ASSERT_EQ(back.size(), 5u);
  for (std::size_t age = 0; age < 5; ++age) EXPECT_EQ(back.at(age), buf.at(age));
  fs::remove(path);
}

TEST(Dump, ReplayBufferRoundTrip) {
  ReplayBuffer buf(3, 2, 1);
  for (int i = 0; i < 4; ++i) buf.push(make_transition(i * 0.7));
  const auto path = temp_path("replay.bin");
  save_buffer(buf, path);
  const auto back = load_replay_buffer(path, 2, 1);
  ASSERT_EQ(back.size(), 3u);
  for (std::size_t age = 0; age < 3; ++age) {
    EXPECT_EQ(back.at(age).state, buf.at(age).state);
    EXPECT_EQ(back.at(age).reward, buf.at(age).reward);
    EXPECT_EQ(back.at(age).truncated, buf.at(age).truncated);
  }
  EXPECT_THROW(load_replay_buffer(path, 3, 1), DimensionError);
  fs::remove(path);
}

TEST(Dump, HeaderLayout) {
  ActionBuffer buf(4, 1);
  buf.push(vec({1.5}));
  const auto path = temp_path("header.bin");
  save_buffer(buf, path);
  std::ifstream in(path, std::ios::binary);
  std::array<unsigned char, 4 + 4 + 8 + 8 + 8 + 8> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  ASSERT_TRUE(in);
  auto u64 = [&](std::size_t off) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[off + static_cast<std::size_t>(i)];
    return v;
  };
  EXPECT_EQ(u64(0) & 0xffffffffu, BufferBlock::kMagic);
  EXPECT_EQ(u64(0) >> 32, BufferBlock::kVersion);
  EXPECT_EQ(u64(8), 4u);
  EXPECT_EQ(u64(16), 1u);
  EXPECT_EQ(u64(24), 1u);
  EXPECT_EQ(std::bit_cast<double>(u64(32)), 1.5);
  fs::remove(path);
}

TEST(Dump, CorruptFileThrows) {
  const auto path = temp_path("bad.bin");
  std::ofstream(path, std::ios::binary) << "not a dump";
  EXPECT_THROW(load_action_buffer(path), IoError);
  EXPECT_THROW(load_action_buffer(temp_path("missing.bin")), IoError);
  fs::remove(path);
}
