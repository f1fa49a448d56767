#include <benchmark/benchmark.h>

#include "dioph/constructors.hpp"
#include "dioph/continued_fraction.hpp"
#include "dioph/distance_kernel.hpp"
#include "dioph/exponents.hpp"
#include "dioph/variety.hpp"

using namespace dioph;

namespace {

RealSource sqrt2() { return RealSource::periodic_continued_fraction({Integer(1)}, {Integer(2)}); }
RealSource sqrt3() { return RealSource::periodic_continued_fraction({Integer(1)}, {Integer(1), Integer(2)}); }

void BM_KernelDistanceScan(benchmark::State& state) {
  RealSource s = sqrt2();
  std::vector<RealSource> v{s};
  Integer den = DistanceKernel::common_denominator(v, 128);
  DistanceKernel k = *DistanceKernel::make(s, den);
  DistanceKernel::Value out;
  const unsigned long n = static_cast<unsigned long>(state.range(0));
  for (auto _ : state) {
    for (unsigned long x = 1; x <= n; ++x) k.distance(x, out);
    benchmark::DoNotOptimize(out.lo);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_KernelDistanceScan)->Arg(1 << 12)->Arg(1 << 16);

void BM_Enclosure(benchmark::State& state) {
  const unsigned bits = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    RealSource s = sqrt2();
    benchmark::DoNotOptimize(s.enclosure(bits));
  }
}
BENCHMARK(BM_Enclosure)->Arg(256)->Arg(4096);

void BM_BestApproximations(benchmark::State& state) {
  RealSource s = sqrt3();
  for (auto _ : state) benchmark::DoNotOptimize(best_approximations(s, Integer(state.range(0))));
}
BENCHMARK(BM_BestApproximations)->Arg(10000)->Arg(100000);

void BM_OmegaTwoSources(benchmark::State& state) {
  std::vector<RealSource> src{sqrt2(), sqrt3()};
  WindowSchedule sched = geometric_schedule(Integer(8), Integer(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_omega_k(src, sched));
}
BENCHMARK(BM_OmegaTwoSources)->Arg(10000)->Arg(100000);

void BM_ChiCandidates(benchmark::State& state) {
  std::vector<RealSource> src{sqrt2(), sqrt3()};
  WindowSchedule sched = geometric_schedule(Integer(8), Integer(state.range(0)), 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_chi_k(src, sched, SearchMethod::ConvergentCandidates));
  }
}
BENCHMARK(BM_ChiCandidates)->Arg(100000)->Arg(1000000);

void BM_ConstructVeronese(benchmark::State& state) {
  ConstructionPlan p;
  p.kind = PlanKind::Veronese;
  p.k = 2;
  p.lambdas = {2};
  p.depth = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(construct(p));
}
BENCHMARK(BM_ConstructVeronese)->Arg(4)->Arg(5);

void BM_VarietyScanFermat(benchmark::State& state) {
  MultiPolynomial p = MultiPolynomial::from_terms(2, {{{3, 0}, 1}, {{0, 3}, 1}, {{0, 0}, -1}});
  Box box{{Rational(-3, 2), Rational(3, 2)}, {Rational(-3, 2), Rational(3, 2)}};
  RationalPointSet pts = rational_point_search(p, Integer(20));
  for (auto _ : state) {
    benchmark::DoNotOptimize(variety_approx_scan(p, box, Integer(state.range(0)), Rational(5, 2), pts));
  }
}
BENCHMARK(BM_VarietyScanFermat)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
