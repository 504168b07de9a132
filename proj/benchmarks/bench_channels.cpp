#include <benchmark/benchmark.h>

#include <vector>

#include "ldpq/channel_ni.hpp"
#include "ldpq/channel_si.hpp"
#include "ldpq/density.hpp"
#include "ldpq/haar.hpp"
#include "ldpq/rng.hpp"

using namespace ldpq;

static void BM_SanitizeNi(benchmark::State& state) {
    NiConfig cfg;
    cfg.J = static_cast<int>(state.range(0));
    Rng rng(1);
    NiRecord z(cfg.J);
    double x = 0.0;
    for (auto _ : state) {
        x = rng.uniform();
        sanitize_ni_into(x, cfg, rng, z);
        benchmark::DoNotOptimize(z[0]);
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<int64_t>(z.size()));
}
BENCHMARK(BM_SanitizeNi)->Arg(4)->Arg(8)->Arg(10);

static void BM_EstimateQuadraticNi(benchmark::State& state) {
    NiConfig cfg;
    cfg.J = 6;
    Rng rng(2);
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    std::vector<NiRecord> records;
    records.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        records.push_back(sanitize_ni(rng.uniform(), cfg, rng));
    for (auto _ : state)
        benchmark::DoNotOptimize(estimate_quadratic_ni(records));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}
BENCHMARK(BM_EstimateQuadraticNi)->Arg(1 << 10)->Arg(1 << 14);

static void BM_Sample(benchmark::State& state) {
    BesovSpec spec;
    spec.levels = {static_cast<int>(state.range(0))};
    const auto d = make_besov_density(spec);
    Rng rng(3);
    for (auto _ : state) {
        const auto xs = sample(d, 1024, rng);
        benchmark::DoNotOptimize(xs.data());
    }
    state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_Sample)->Arg(3)->Arg(8);

static void BM_SiProtocol(benchmark::State& state) {
    BesovSpec spec;
    spec.levels = {3};
    const auto d = make_besov_density(spec);
    SiConfig cfg;
    cfg.J = static_cast<int>(state.range(0));
    cfg.tau = select_tau(cfg.K, cfg.M, cfg.J, cfg.a, cfg.s_eff);
    Rng rng(4);
    const auto xs = sample(d, 4096, rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(run_si_protocol(xs, cfg, rng));
    state.SetItemsProcessed(state.iterations() * 4096);
}
BENCHMARK(BM_SiProtocol)->Arg(4)->Arg(8);

static void BM_Laplace(benchmark::State& state) {
    Rng rng(5);
    for (auto _ : state) benchmark::DoNotOptimize(rng.laplace());
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Laplace);

BENCHMARK_MAIN();
