#include <benchmark/benchmark.h>

#include "abelheight/jacobian.hpp"
#include "abelheight/kummer.hpp"
#include "abelheight/theta.hpp"
#include "abelheight/torsion3.hpp"

using namespace ah;

namespace {

std::array<Rat, 6> tau_entries(long im) {
  return {frac(1, 10), Rat(im), Rat(0), frac(1, 2), Rat(0), Rat(im + 3)};
}

// y^2 = x^5 + x^2 + 4 with (0,2) + (-1,2), a point of infinite order
Curve sample_curve() { return Curve({Int(4), Int(0), Int(1), Int(0), Int(0), Int(1)}); }

Divisor sample_divisor(const Curve& C) {
  return cantor_add(C, embed_point(C, Rat(0), Rat(2)), embed_point(C, Rat(-1), Rat(2)));
}

void BM_Theta(benchmark::State& state) {
  long prec = state.range(0);
  PeriodMatrix tau = PeriodMatrix::with_headroom(tau_entries(2), prec);
  TorusPoint P{{frac(1, 7), Rat(0)}, {Rat(0), frac(1, 5)}};
  auto Z = P.z(tau, prec);
  for (auto _ : state) benchmark::DoNotOptimize(theta(lambda_characteristic(), Z, tau, prec));
}
BENCHMARK(BM_Theta)->Arg(64)->Arg(128)->Arg(256)->Arg(512);

void BM_BigLambda(benchmark::State& state) {
  PeriodMatrix tau = PeriodMatrix::with_headroom(tau_entries(state.range(0)));
  TorusPoint P{{frac(1, 7), Rat(0)}, {Rat(0), frac(1, 5)}};
  for (auto _ : state) benchmark::DoNotOptimize(big_lambda(P, tau));
}
BENCHMARK(BM_BigLambda)->Arg(2)->Arg(8)->Arg(31);

void BM_EvenThetaConstants(benchmark::State& state) {
  PeriodMatrix tau = PeriodMatrix::with_headroom(tau_entries(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(even_theta_constants(tau));
}
BENCHMARK(BM_EvenThetaConstants)->Arg(2)->Arg(31);

void BM_Duplicate(benchmark::State& state) {
  Curve C = sample_curve();
  KummerPoint k = kummer_map(C, sample_divisor(C));
  for (int i = 0; i < state.range(0); ++i) k = duplicate(C, k).point;
  for (auto _ : state) benchmark::DoNotOptimize(duplicate(C, k));
}
BENCHMARK(BM_Duplicate)->DenseRange(0, 6, 2);

void BM_CantorAdd(benchmark::State& state) {
  Curve C = sample_curve();
  Divisor D = sample_divisor(C);
  Divisor E = cantor_add(C, D, D);
  for (auto _ : state) benchmark::DoNotOptimize(cantor_add(C, D, E));
}
BENCHMARK(BM_CantorAdd);

void BM_CanonicalHeight(benchmark::State& state) {
  Curve C = sample_curve();
  Divisor D = sample_divisor(C);
  archimedean_bounds(C);  // cached after the first call
  for (auto _ : state) benchmark::DoNotOptimize(canonical_height(C, D, 1e-10));
}
BENCHMARK(BM_CanonicalHeight)->Unit(benchmark::kMillisecond);

void BM_ThreeTorsionProduct(benchmark::State& state) {
  Curve C({Int(-1), Int(0), Int(0), Int(0), Int(0), Int(1)});
  for (auto _ : state) benchmark::DoNotOptimize(three_torsion_product(C, 256));
}
BENCHMARK(BM_ThreeTorsionProduct)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace
BENCHMARK_MAIN();
