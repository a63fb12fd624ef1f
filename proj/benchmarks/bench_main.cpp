#include <benchmark/benchmark.h>

#include <complex>

#include "hodge/instance_gen.hpp"
#include "hodge/linalg.hpp"
#include "hodge/weierstrass.hpp"

using namespace hodge;

static void BM_SigmaScalar(benchmark::State& state) {
    const double tol = state.range(0) == 0 ? 1e-8 : 1e-12;
    const std::complex<double> z(2.3, -1.1);
    for (auto _ : state) benchmark::DoNotOptimize(weierstrass::sigma(z, tol));
}
BENCHMARK(BM_SigmaScalar)->Arg(0)->Arg(1);

static void BM_SigmaPlanned(benchmark::State& state) {
    const auto plan = weierstrass::plan_truncation(4.0, 1e-10);
    const std::complex<double> z(2.3, -1.1);
    for (auto _ : state) benchmark::DoNotOptimize(weierstrass::sigma(z, plan));
}
BENCHMARK(BM_SigmaPlanned);

static gen::Instance instance(int n) {
    gen::GenConfig cfg;
    cfg.seed = 7;
    auto inst = gen::random_instance(cfg);
    while (static_cast<int>(inst.triple.n()) < n) {
        ++cfg.seed;
        inst = gen::random_instance(cfg);
    }
    return inst;
}

static void BM_SigmaMatrix(benchmark::State& state) {
    const auto inst = instance(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(weierstrass::sigma_matrix(inst.triple.S, 1e-8));
    state.SetLabel("n=" + std::to_string(inst.triple.n()));
}
BENCHMARK(BM_SigmaMatrix)->Arg(2)->Arg(6)->Arg(12);

static void BM_LatticeSpectrum(benchmark::State& state) {
    const auto inst = instance(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(linalg::lattice_spectrum(inst.triple.S, 1e-8));
    state.SetLabel("n=" + std::to_string(inst.triple.n()));
}
BENCHMARK(BM_LatticeSpectrum)->Arg(2)->Arg(6)->Arg(12);

BENCHMARK_MAIN();
