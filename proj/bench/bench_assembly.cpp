// Serial reference vs OpenMP kernels for field assembly and reconstruction.

#include <benchmark/benchmark.h>

#include "hydronozzle/field.hpp"

namespace {

using namespace hydronozzle;

struct Setup {
  NozzleGeometry g = NozzleGeometry::bump(0.3, 5.0, 0.0, 1.5, true, 20.0);
  VorticitySource src = VorticitySource::from_profile(IncomingProfile::quartic_bump(0.2));
};

const Setup& setup() {
  static const Setup s;
  return s;
}

AssemblyOptions options(benchmark::State& state) {
  AssemblyOptions opts;
  opts.ny1 = static_cast<std::size_t>(state.range(0));
  opts.ny2 = 200;
  return opts;
}

void BM_AssembleSerial(benchmark::State& state) {
  const auto opts = options(state);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_serial(setup().g, setup().src, opts));
}

void BM_AssembleParallel(benchmark::State& state) {
  const auto opts = options(state);
  for (auto _ : state) benchmark::DoNotOptimize(assemble(setup().g, setup().src, opts));
}

void BM_ReconstructSerial(benchmark::State& state) {
  const auto field = assemble(setup().g, setup().src, options(state));
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct_serial(field, setup().g, setup().src));
}

void BM_ReconstructParallel(benchmark::State& state) {
  const auto field = assemble(setup().g, setup().src, options(state));
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct(field, setup().g, setup().src));
}

}  // namespace

BENCHMARK(BM_AssembleSerial)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_AssembleParallel)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ReconstructSerial)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ReconstructParallel)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
