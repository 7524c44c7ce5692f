#include <benchmark/benchmark.h>

#include <random>

#include "chow/boundary.hpp"
#include "chow/goncharov.hpp"

using namespace chow;

namespace {

const int SX = kFirstCycleSym;
const int SY = kFirstCycleSym + 1;

CycleTerm sample_term() {
  RatFunc x = RatFunc::sym(SX), y = RatFunc::sym(SY);
  RatFunc one(1);
  return CycleTerm::make(
      Rat(1),
      {x, y, one - RatFunc(Rat(7, 3)) * x, one - y / x, one - RatFunc(Rat(5, 2)) / y},
      {SX, SY});
}

void BM_PolyGcd(benchmark::State& state) {
  RatFunc x = RatFunc::sym(SX), y = RatFunc::sym(SY);
  RatFunc f = (x * y - RatFunc(1)).pow(3) * (x + y);
  RatFunc g = (x * y - RatFunc(1)).pow(2) * (x - y);
  for (auto _ : state) {
    benchmark::DoNotOptimize(f / g);  // cancellation runs the gcd
  }
}
BENCHMARK(BM_PolyGcd);

void BM_NormalizeTerm(benchmark::State& state) {
  CycleTerm t = sample_term();
  for (auto _ : state) {
    benchmark::DoNotOptimize(normalize_term(t));
  }
}
BENCHMARK(BM_NormalizeTerm);

void BM_Boundary(benchmark::State& state) {
  CycleTerm t = sample_term();
  for (auto _ : state) {
    benchmark::DoNotOptimize(boundary(t));
  }
}
BENCHMARK(BM_Boundary);

void BM_Admissibility(benchmark::State& state) {
  CycleTerm t = sample_term();
  for (auto _ : state) {
    benchmark::DoNotOptimize(is_admissible(t));
  }
}
BENCHMARK(BM_Admissibility);

void BM_ReplayStepNumeric(benchmark::State& state) {
  ReplayContext ctx{RatFunc(2), RatFunc(3), RatFunc(5)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ctx.replay_step(int(state.range(0))));
  }
}
BENCHMARK(BM_ReplayStepNumeric)->Arg(1)->Arg(4)->Arg(7);

}  // namespace

BENCHMARK_MAIN();
