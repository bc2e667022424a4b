// Compares the parallel kernels against the straight-line serial reference.
// Run with --benchmark_filter=frame_operator to look at one family.

#include <benchmark/benchmark.h>

#include "funtf/frames.hpp"
#include "funtf/minimize.hpp"
#include "funtf/reference.hpp"

namespace {

funtf::UnitVectorSystem make_system(std::size_t dim, std::size_t count) {
  return funtf::UnitVectorSystem::random(dim, count, 12345);
}

void bm_frame_operator_ref(benchmark::State& state) {
  const auto sys = make_system(state.range(0), state.range(1));
  for (auto _ : state) {
    auto s = funtf::ref::frame_operator(sys);
    benchmark::DoNotOptimize(s);
  }
}

void bm_frame_operator_par(benchmark::State& state) {
  const auto sys = make_system(state.range(0), state.range(1));
  for (auto _ : state) {
    auto s = funtf::frame_operator(sys);
    benchmark::DoNotOptimize(s);
  }
}

void bm_potential_ref(benchmark::State& state) {
  const auto sys = make_system(state.range(0), state.range(1));
  for (auto _ : state) {
    double p = funtf::ref::frame_potential(sys);
    benchmark::DoNotOptimize(p);
  }
}

void bm_potential_par(benchmark::State& state) {
  const auto sys = make_system(state.range(0), state.range(1));
  for (auto _ : state) {
    double p = funtf::frame_potential(sys);
    benchmark::DoNotOptimize(p);
  }
}

void bm_gradient_ref(benchmark::State& state) {
  const auto sys = make_system(state.range(0), state.range(1));
  for (auto _ : state) {
    auto g = funtf::ref::fp_gradient(sys);
    benchmark::DoNotOptimize(g);
  }
}

void bm_gradient_par(benchmark::State& state) {
  const auto sys = make_system(state.range(0), state.range(1));
  for (auto _ : state) {
    auto g = funtf::fp_gradient(sys);
    benchmark::DoNotOptimize(g);
  }
}

void shapes(benchmark::internal::Benchmark* b) {
  b->Args({32, 256})->Args({32, 1024})->Args({64, 256})->Args({64, 1024});
}

BENCHMARK(bm_frame_operator_ref)->Apply(shapes);
BENCHMARK(bm_frame_operator_par)->Apply(shapes);
BENCHMARK(bm_potential_ref)->Apply(shapes);
BENCHMARK(bm_potential_par)->Apply(shapes);
BENCHMARK(bm_gradient_ref)->Apply(shapes);
BENCHMARK(bm_gradient_par)->Apply(shapes);

}  // namespace

BENCHMARK_MAIN();
