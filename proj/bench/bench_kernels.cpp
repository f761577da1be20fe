/// @file bench_kernels.cpp
/// @brief Mollification backends and the Hölder scan on channel grids.

#include "pelab/holder.hpp"
#include "pelab/mollify.hpp"
#include "pelab/synthetic.hpp"

#include <benchmark/benchmark.h>

using namespace pelab;

namespace {

HField field(int n) {
    SyntheticSpec s;
    const Grid3 g = Grid3::channel(n, n, n, 1.0);
    s.K = max_resolvable_octave(g, 2.0);
    return make_weierstrass(s, g);
}

void mollify_backend(benchmark::State& st, Backend b) {
    const int n = static_cast<int>(st.range(0));
    const HField u = field(n);
    const Mollifier m{4.0 / n};
    for (auto _ : st) benchmark::DoNotOptimize(mollify(u[0], m, b));
    st.SetItemsProcessed(st.iterations() * static_cast<long>(u.grid().size()));
}

void BM_MollifySerial(benchmark::State& st) { mollify_backend(st, Backend::Serial); }
void BM_MollifyParallel(benchmark::State& st) { mollify_backend(st, Backend::Parallel); }
void BM_MollifyFFT(benchmark::State& st) { mollify_backend(st, Backend::FFT); }

void BM_HolderScan(benchmark::State& st) {
    const HField u = field(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(seminorm_aniso(u, 0.7, 0.7));
}

} // namespace

BENCHMARK(BM_MollifySerial)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MollifyParallel)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MollifyFFT)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HolderScan)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
