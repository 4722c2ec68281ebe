#include <benchmark/benchmark.h>

#include "cg/kernel.hpp"
#include "generators.hpp"

namespace {

std::vector<cgtest::Typed> sample(int depth, int count) {
  cgtest::TermWorld w;
  cgtest::Rng rng(42);
  cgtest::TermGen gen(w, rng);
  std::vector<cgtest::Typed> out;
  for (int k = 0; k < count; ++k) out.push_back(gen.typed(depth));
  return out;
}

void BM_Normalize(benchmark::State& state) {
  cgtest::TermWorld w;
  cg::TypingContext ctx(w.sig);
  auto terms = sample(static_cast<int>(state.range(0)), 64);
  for (auto _ : state) {
    for (const auto& t : terms) benchmark::DoNotOptimize(cg::normalize(ctx, t.term));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(terms.size()));
}
BENCHMARK(BM_Normalize)->Arg(2)->Arg(3)->Arg(4);

void BM_InferType(benchmark::State& state) {
  cgtest::TermWorld w;
  cg::TypingContext ctx(w.sig);
  auto terms = sample(static_cast<int>(state.range(0)), 64);
  for (auto _ : state) {
    for (const auto& t : terms) benchmark::DoNotOptimize(cg::infer_type(ctx, t.term));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(terms.size()));
}
BENCHMARK(BM_InferType)->Arg(2)->Arg(3)->Arg(4);

}  // namespace
