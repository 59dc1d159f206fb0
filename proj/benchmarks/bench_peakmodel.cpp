#include <benchmark/benchmark.h>

#include "peakmodel/omega_transform.hpp"
#include "peakmodel/reference_space.hpp"
#include "peakmodel/sampling.hpp"

using namespace peakmodel;

namespace {

// Hermitian configuration with m, d from the arguments and N = md + extra
Setup bench_setup(benchmark::State& st) {
  Rng rng(42);
  return hermitian_setup(rng, int(st.range(0)), int(st.range(1)), int(st.range(2)));
}

void BM_build_gram(benchmark::State& st) {
  const Setup s = bench_setup(st);
  for (auto _ : st) benchmark::DoNotOptimize(build_gram(s));
  st.counters["N"] = double(s.N);
}

void BM_weyl_peak(benchmark::State& st) {
  const Peak p = make_peak(bench_setup(st));
  const cplx z(0.3, 0.7);
  for (auto _ : st) benchmark::DoNotOptimize(weyl_peak(p, z));
}

void BM_krein_peak(benchmark::State& st) {
  const Peak p = make_peak(bench_setup(st));
  const TripleHandle h = peak_handle(p);
  Rng rng(1);
  const VecC v = random_cvec(rng, h.dim);
  const LinearRelationFD th = relation_graph(MatC::Identity(p.s.d, p.s.d));
  for (auto _ : st) benchmark::DoNotOptimize(krein_resolvent(h, th, cplx(0.3, 0.7), v));
}

void BM_krein_classical(benchmark::State& st) {
  const Setup s = bench_setup(st);
  const TripleHandle h = classical_handle(s);
  Rng rng(1);
  const VecC v = random_cvec(rng, h.dim);
  const LinearRelationFD th = relation_graph(MatC::Identity(s.d, s.d));
  for (auto _ : st) benchmark::DoNotOptimize(krein_resolvent(h, th, cplx(0.3, 0.7), v));
}

void BM_reference_frame(benchmark::State& st) {
  const Peak p = make_peak(bench_setup(st));
  for (auto _ : st) benchmark::DoNotOptimize(make_frame(p));
}

void BM_m_omega(benchmark::State& st) {
  const Peak p = make_peak(bench_setup(st));
  const IotaDeformation io = make_iota(p, IotaSpec::random(3, 0.5));
  for (auto _ : st) benchmark::DoNotOptimize(m_omega(p, io, cplx(0.3, 0.7)));
}

// {m, d, extra eigenvalues}
void sizes(benchmark::internal::Benchmark* b) {
  b->Args({1, 1, 8})->Args({2, 2, 16})->Args({3, 3, 40})->Args({5, 4, 44});
}

}  // namespace

BENCHMARK(BM_build_gram)->Apply(sizes);
BENCHMARK(BM_weyl_peak)->Apply(sizes);
BENCHMARK(BM_krein_peak)->Apply(sizes);
BENCHMARK(BM_krein_classical)->Apply(sizes);
BENCHMARK(BM_reference_frame)->Apply(sizes);
BENCHMARK(BM_m_omega)->Apply(sizes);

BENCHMARK_MAIN();
