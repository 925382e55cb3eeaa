#include <benchmark/benchmark.h>

#include <random>

#include "edshor/sim.hpp"
#include "edshor/synth.hpp"

using namespace edshor;

static void BM_FieldMul(benchmark::State& state) {
  const Field f = Field::standard(static_cast<std::size_t>(state.range(0)));
  std::mt19937_64 rng(1);
  BitVec a(f.degree()), b(f.degree());
  for (std::size_t i = 0; i < f.degree(); ++i) {
    a.set(i, rng() & 1u);
    b.set(i, rng() & 1u);
  }
  FieldElement x = f.element(a);
  const FieldElement y = f.element(b);
  for (auto _ : state) {
    x = x * y;
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_FieldMul)->Arg(8)->Arg(163)->Arg(233);

static void BM_ItohTsuji(benchmark::State& state) {
  const Field f = Field::standard(static_cast<std::size_t>(state.range(0)));
  const FieldElement x = f.generator();
  for (auto _ : state) benchmark::DoNotOptimize(itoh_tsuji_inverse(x));
}
BENCHMARK(BM_ItohTsuji)->Arg(163)->Arg(233);

static void BM_SynthMulMeter(benchmark::State& state) {
  SynthConfig cfg{Field::standard(static_cast<std::size_t>(state.range(0)))};
  cfg.uncompute = gadgets::Uncompute::kGarbage;
  cfg.mode = BuildMode::kMeter;
  for (auto _ : state) benchmark::DoNotOptimize(synth_mul(cfg).report.depth);
}
BENCHMARK(BM_SynthMulMeter)->Arg(16)->Arg(64)->Arg(163)->Unit(benchmark::kMillisecond);

static void BM_SynthTreeMeter(benchmark::State& state) {
  const Field f = Field::standard(static_cast<std::size_t>(state.range(0)));
  const CurvePoints cp = default_curve(f);
  SynthConfig cfg{f, cp.curve, gadgets::Uncompute::kGarbage};
  cfg.mode = BuildMode::kMeter;
  for (auto _ : state) {
    benchmark::DoNotOptimize(synth_double_scalar(cfg, cp.p, cp.q, ScalarMethod::kTree).report.depth);
  }
}
BENCHMARK(BM_SynthTreeMeter)->Arg(7)->Arg(15)->Unit(benchmark::kMillisecond);

static void BM_LaneSimAdder(benchmark::State& state) {
  const Field f = Field::standard(static_cast<std::size_t>(state.range(0)));
  const CurvePoints cp = default_curve(f);
  const Circuit c = synth_point_add(SynthConfig{f, cp.curve}).circuit;
  for (auto _ : state) {
    LaneBatch lb(c.width());
    lb.run(c);
    benchmark::DoNotOptimize(lb.word(0));
  }
  state.counters["gates"] = static_cast<double>(c.gates().size());
}
BENCHMARK(BM_LaneSimAdder)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_ShorDistribution(benchmark::State& state) {
  const Field f = Field::standard(static_cast<std::size_t>(state.range(0)));
  const ToyCurve toy = find_toy_curve(f);
  const AffinePoint q = scalar_mul(toy.curve, 3, toy.generator);
  for (auto _ : state) benchmark::DoNotOptimize(shor_distribution(toy.curve, toy.generator, q));
}
BENCHMARK(BM_ShorDistribution)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
