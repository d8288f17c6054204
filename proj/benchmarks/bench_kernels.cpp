#include <benchmark/benchmark.h>

#include <random>

#include "sumprod/regularity.hpp"
#include "sumprod/search.hpp"
#include "sumprod/setops.hpp"
#include "sumprod/spectral.hpp"

namespace sp = sumprod;

namespace {

sp::GSet random_set(const sp::GroupSpec& g, double density, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(density);
    sp::GSet s(g);
    for (std::int64_t x = 0; x < g.order; ++x)
        if (coin(rng)) s.insert(x);
    return s;
}

void BM_SumsetKernel(benchmark::State& state) {
    sp::GroupSpec g = sp::make_group({state.range(0)});
    sp::GSet a = random_set(g, 0.3, 1);
    sp::GSet b = random_set(g, 0.3, 2);
    for (auto _ : state) benchmark::DoNotOptimize(sp::sumset(a, b));
}
BENCHMARK(BM_SumsetKernel)->Arg(521)->Arg(2053)->Arg(8191);

void BM_Fourier(benchmark::State& state) {
    sp::GroupSpec g = sp::make_group({state.range(0)});
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    sp::GridFunction f = sp::GridFunction::zero(g);
    for (auto& v : f.values) v = sp::cplx(u(rng), u(rng));
    for (auto _ : state) benchmark::DoNotOptimize(sp::fourier(f));
}
BENCHMARK(BM_Fourier)->Arg(1024)->Arg(1009)->Arg(4096)->Arg(10007);

void BM_WeakRegularity(benchmark::State& state) {
    sp::GroupSpec g = sp::make_group({211});
    sp::GSet a(g);
    for (std::int64_t x = 0; x < 105; ++x) a.insert(x);
    sp::GridFunction f = sp::to_indicator(a);
    for (auto _ : state) benchmark::DoNotOptimize(sp::weak_regularity(f, 0.25));
}
BENCHMARK(BM_WeakRegularity);

void BM_ExhaustiveSearch(benchmark::State& state) {
    sp::MulStructure mul = sp::find_primitive_root(state.range(0));
    sp::SearchConfig cfg;
    cfg.workers = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(sp::exhaustive_search(mul, 3, cfg));
}
BENCHMARK(BM_ExhaustiveSearch)->Args({17, 1})->Args({19, 1})->Args({19, 4});

} // namespace

BENCHMARK_MAIN();
