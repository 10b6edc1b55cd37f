#include <benchmark/benchmark.h>

#include "banditmt/bleu.hpp"
#include "banditmt/rng.hpp"

using namespace banditmt;

namespace {

Tokens sentence(RngStream &rng, std::size_t n) {
    Tokens t;
    for (std::size_t i = 0; i < n; ++i) t.push_back("w" + std::to_string(rng.uniform_index(200)));
    return t;
}

void BM_SentenceBleu(benchmark::State &state) {
    RngStream rng(1);
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto hyp = sentence(rng, n), ref = sentence(rng, n);
    for (auto _ : state) benchmark::DoNotOptimize(sentence_bleu(hyp, ref));
}
BENCHMARK(BM_SentenceBleu)->Arg(25)->Arg(100);

void BM_Tokenize(benchmark::State &state) {
    const std::string text = "Ndewo, ụwa! The committee met on Tuesday (again) to discuss the 2024 budget.";
    for (auto _ : state) benchmark::DoNotOptimize(tokenize(text));
}
BENCHMARK(BM_Tokenize);

} // namespace
