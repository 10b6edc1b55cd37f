#include <benchmark/benchmark.h>

#include "banditmt/linalg.hpp"
#include "banditmt/linucb.hpp"
#include "banditmt/neural_linucb.hpp"
#include "banditmt/rng.hpp"
#include "banditmt/thompson.hpp"
#include "banditmt/ucb.hpp"

using namespace banditmt;

namespace {

std::vector<double> unit_context(RngStream &rng, std::size_t d) {
    std::vector<double> x(d);
    double n = 0.0;
    for (auto &v : x) {
        v = rng.gaussian();
        n += v * v;
    }
    for (auto &v : x) v /= std::sqrt(n);
    return x;
}

void BM_Rank1Update(benchmark::State &state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    RngStream rng(1);
    auto m = linalg::SymMatrix::identity(d);
    const auto x = unit_context(rng, d);
    for (auto _ : state) {
        linalg::rank1_inverse_update(m, x);
        benchmark::DoNotOptimize(m.data().data());
    }
}
BENCHMARK(BM_Rank1Update)->Arg(8)->Arg(64)->Arg(768);

void BM_UcbRound(benchmark::State &state) {
    UcbPolicy policy(5);
    RngStream rng(2);
    for (auto _ : state) {
        const auto a = policy.select({}, rng);
        policy.update(a, {}, RewardSignal(rng.uniform()));
    }
}
BENCHMARK(BM_UcbRound);

void BM_ThompsonRound(benchmark::State &state) {
    ThompsonPolicy policy(5);
    RngStream rng(3);
    for (auto _ : state) {
        const auto a = policy.select({}, rng);
        policy.update(a, {}, RewardSignal(rng.uniform()));
    }
}
BENCHMARK(BM_ThompsonRound);

// select + update over 5 arms at sentence-encoder dimension
void BM_LinUcbRound(benchmark::State &state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    LinUcbPolicy policy(5, d);
    RngStream rng(4);
    const auto x = unit_context(rng, d);
    for (auto _ : state) {
        const auto a = policy.select(x, rng);
        policy.update(a, x, RewardSignal(0.5));
    }
}
BENCHMARK(BM_LinUcbRound)->Arg(8)->Arg(768);

void BM_NeuralLinUcbSelect(benchmark::State &state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    NeuralLinUcbPolicy policy(5, d, NeuralLinUcbConfig{}, 5);
    RngStream rng(6);
    const auto x = unit_context(rng, d);
    for (auto _ : state) benchmark::DoNotOptimize(policy.select(x, rng));
}
BENCHMARK(BM_NeuralLinUcbSelect)->Arg(8)->Arg(768);

void BM_NeuralLinUcbTrain(benchmark::State &state) {
    NeuralLinUcbConfig cfg;
    cfg.train_every = 0;
    NeuralLinUcbPolicy policy(5, 8, cfg, 7);
    RngStream rng(8);
    for (int i = 0; i < 512; ++i) {
        const auto x = unit_context(rng, 8);
        policy.update(ArmId(rng.uniform_index(5)), x, RewardSignal(rng.uniform()));
    }
    for (auto _ : state) policy.train();
}
BENCHMARK(BM_NeuralLinUcbTrain)->Unit(benchmark::kMillisecond);

} // namespace
