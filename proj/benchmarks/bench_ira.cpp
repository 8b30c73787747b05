#include <benchmark/benchmark.h>

#include "ira/agents/agent.hpp"
#include "ira/harness/runtime.hpp"
#include "ira/memory/knn.hpp"

using namespace ira;
using numerics::Matrix;
using numerics::Rng;
using numerics::Vector;

namespace {

Matrix uniform(Eigen::Index r, Eigen::Index c, Rng& rng, double lo, double hi) {
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rng.uniform(lo, hi);
  return m;
}

memory::ActionBuffer filled_buffer(std::size_t n, int dim, Rng& rng) {
  memory::ActionBuffer buf(n, dim);
  for (std::size_t i = 0; i < n; ++i) buf.push(uniform(dim, 1, rng, -1.0, 1.0).col(0));
  return buf;
}

void BM_KnnScan(benchmark::State& state) {
  Rng rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const int dim = static_cast<int>(state.range(1));
  const auto buf = filled_buffer(n, dim, rng);
  const Vector q = uniform(dim, 1, rng, -1.0, 1.0).col(0);
  for (auto _ : state) benchmark::DoNotOptimize(memory::knn(q, buf, 10, memory::Metric::linf));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_KnnScan)->Args({1000, 1})->Args({30000, 1})->Args({200000, 1})->Args({200000, 6});

void BM_CriticForwardBackward(benchmark::State& state) {
  Rng rng(2);
  const auto cfg = agents::AlgoConfig::defaults_for(agents::Algorithm::td3);
  const auto agent = agents::make_agent(3, 1, 2.0, cfg, rng);
  const Matrix x = uniform(state.range(0), 4, rng, -1.0, 1.0);
  const Matrix g = Matrix::Ones(state.range(0), 1);
  for (auto _ : state) {
    const auto pass = numerics::mlp_forward(agent.critic1, x);
    benchmark::DoNotOptimize(numerics::mlp_backward(agent.critic1, pass, g));
  }
}
BENCHMARK(BM_CriticForwardBackward)->Arg(1)->Arg(256)->Arg(2560);

void BM_RankBatch(benchmark::State& state) {
  Rng rng(3);
  const auto cfg = agents::AlgoConfig::defaults_for(agents::Algorithm::ira);
  const auto agent = agents::make_agent(3, 1, 2.0, cfg, rng);
  const auto buf = filled_buffer(30000, 1, rng);
  const Matrix states = uniform(256, 3, rng, -1.0, 1.0);
  const auto sets = memory::knn_batch(uniform(256, 1, rng, -1.0, 1.0), buf, cfg.k, cfg.metric);
  const numerics::MlpParams* critics[] = {&agent.critic1_target, &agent.critic2_target};
  for (auto _ : state) benchmark::DoNotOptimize(memory::rank_batch(states, sets, critics));
}
BENCHMARK(BM_RankBatch);

void BM_TrainStep(benchmark::State& state) {
  const auto algo = static_cast<agents::Algorithm>(state.range(0));
  Rng rng(4), sampling(5), smoothing(6);
  const auto cfg = agents::AlgoConfig::defaults_for(algo);
  auto agent = agents::make_agent(3, 1, 2.0, cfg, rng);
  memory::ReplayBuffer replay(50000, 3, 1);
  memory::ActionBuffer actions(50000, 1);
  for (int i = 0; i < 30000; ++i) {
    memory::Transition t;
    t.state = uniform(3, 1, rng, -1.0, 1.0).col(0);
    t.action = uniform(1, 1, rng, -2.0, 2.0).col(0);
    t.reward = rng.uniform(-16.0, 0.0);
    t.next_state = uniform(3, 1, rng, -1.0, 1.0).col(0);
    replay.push(t);
    actions.push(t.action);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(agents::train_step(agent, replay, actions, 256, 0.5, cfg, {&sampling, &smoothing}));
  }
  state.SetLabel(std::string(agents::to_string(algo)));
}
BENCHMARK(BM_TrainStep)
    ->Arg(static_cast<int>(agents::Algorithm::td3))
    ->Arg(static_cast<int>(agents::Algorithm::ira))
    ->Arg(static_cast<int>(agents::Algorithm::nntd3))
    ->Unit(benchmark::kMillisecond);

}  // namespace

int main(int argc, char** argv) {
  harness::configure_allocator();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
