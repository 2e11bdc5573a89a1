#include <benchmark/benchmark.h>

#include <cstdint>

#include "torfol/fan.hpp"
#include "torfol/foliation.hpp"
#include "torfol/mori.hpp"
#include "torfol/polycone.hpp"
#include "torfol/rational.hpp"
#include "torfol/singclass.hpp"
#include "torfol/verify.hpp"

namespace {

using namespace torfol;

RandomSample sample_rank3(std::uint64_t seed, int subdivisions) {
  RandomFanSpec spec;
  spec.seed = seed;
  spec.rank = 3;
  spec.base = BaseFan::projective_space;
  spec.subdivisions = subdivisions;
  return random_complete_fan(spec);
}

// extreme rays of the cone over a cube, a classic double-description load
void BM_extreme_rays(benchmark::State& state) {
  RatCone c;
  const long n = state.range(0);
  for (long mask = 0; mask < (1L << n); ++mask) {
    RatVector g(n + 1, Rat(1));
    for (long i = 0; i < n; ++i) g[i] = mask & (1L << i) ? Rat(1) : Rat(-1);
    c.generators.push_back(std::move(g));
  }
  for (auto _ : state) benchmark::DoNotOptimize(extreme_rays(c));
}
BENCHMARK(BM_extreme_rays)->Arg(3)->Arg(4)->Arg(5);

// lattice points of the dilated standard simplex in three variables
void BM_lattice_points(benchmark::State& state) {
  RatPolytope p;
  for (int i = 0; i < 3; ++i) {
    RatVector a(3, Rat(0));
    a[i] = Rat(-1);
    p.add_ineq(std::move(a), Rat(0));
  }
  p.add_ineq(RatVector(3, Rat(1)), Rat(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lattice_points(p));
}
BENCHMARK(BM_lattice_points)->Arg(4)->Arg(8)->Arg(12);

// full terminal/canonical classification of a seeded complete pair
void BM_classify(benchmark::State& state) {
  const auto s = sample_rank3(7, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(classify(s.fan, s.v));
}
BENCHMARK(BM_classify)->Arg(0)->Arg(2)->Arg(4);

// extremal curve classes of a seeded complete fan
void BM_extremal_rays(benchmark::State& state) {
  const auto s = sample_rank3(11, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(extremal_rays(s.fan));
}
BENCHMARK(BM_extremal_rays)->Arg(0)->Arg(2)->Arg(4);

// a whole directed minimal model run on a seeded complete pair
void BM_run_mmp(benchmark::State& state) {
  const auto s = sample_rank3(13, static_cast<int>(state.range(0)));
  MmpOptions options;
  options.allow_noncanonical = true;
  for (auto _ : state) benchmark::DoNotOptimize(run_mmp(s.fan, s.v, options));
}
BENCHMARK(BM_run_mmp)->Arg(0)->Arg(2)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
