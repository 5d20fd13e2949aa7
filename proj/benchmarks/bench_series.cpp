#include <primeseries/dirichlet.hpp>
#include <primeseries/harness.hpp>
#include <primeseries/multiplicative.hpp>
#include <primeseries/noise.hpp>
#include <primeseries/primes.hpp>

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

using namespace primeseries;

namespace {

const PrimeTable& table_1e6() {
    static const PrimeTable table = PrimeTable::sieve(1'000'000);
    return table;
}

void BM_eta_at(benchmark::State& state) {
    const SeedSpec seed{42, 0};
    const NoiseModel model = NoiseModel::gaussian(1.0);
    const auto& primes = table_1e6().primes();
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(eta_at(seed, model, primes[i]));
        i = (i + 1) % primes.size();
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_eta_at);

void BM_partial_series(benchmark::State& state) {
    SeriesQuery q;
    q.s = 0.01;
    q.cutoff_P = std::uint64_t(state.range(0));
    q.seed = {42, 0};
    q.model = NoiseModel::rademacher(1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(partial_series(table_1e6(), q));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_partial_series)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

void BM_truncated_variance(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(truncated_variance(table_1e6(), 1e-4, 1'000'000, 1.0));
}
BENCHMARK(BM_truncated_variance)->Unit(benchmark::kMillisecond);

void BM_path_sample(benchmark::State& state) {
    PathQuery pq;
    pq.mode = PathMode::exponential;
    pq.scale = 10.0;
    pq.grid = {0.25, 0.5, 1.0};
    pq.cutoff_P = std::uint64_t(state.range(0));
    pq.seed = {42, 0};
    pq.model = NoiseModel::rademacher(1.0);
    for (auto _ : state) {
        const std::vector<double> values = path_sample(table_1e6(), pq);
        benchmark::DoNotOptimize(values.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_path_sample)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

void BM_euler_product(benchmark::State& state) {
    const SeedSpec seed{7, 0};
    for (auto _ : state)
        benchmark::DoNotOptimize(euler_product(table_1e6(), seed, 0.5, 13, 4));
}
BENCHMARK(BM_euler_product);

void BM_smooth_expansion(benchmark::State& state) {
    const SeedSpec seed{7, 0};
    for (auto _ : state)
        benchmark::DoNotOptimize(smooth_expansion_sum(table_1e6(), seed, 0.5, 13, 4));
}
BENCHMARK(BM_smooth_expansion);

void BM_log_decomposition(benchmark::State& state) {
    const SeedSpec seed{7, 0};
    for (auto _ : state) {
        const DecompositionReport d =
            log_decomposition(table_1e6(), seed, 0.01, std::uint64_t(state.range(0)), 2);
        benchmark::DoNotOptimize(d.residual);
    }
}
BENCHMARK(BM_log_decomposition)->Arg(1'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_mult_table(benchmark::State& state) {
    const SeedSpec seed{11, 2};
    for (auto _ : state) {
        const MultTable t(seed, std::uint64_t(state.range(0)), 2);
        benchmark::DoNotOptimize(t.f(std::uint64_t(state.range(0))));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_mult_table)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_lindeberg_profile(benchmark::State& state) {
    const NoiseModel model = NoiseModel::gaussian(1.0);
    const std::vector<double> shifts{0.1, 0.01, 0.001};
    for (auto _ : state) {
        const std::vector<double> profile =
            lindeberg_profile(table_1e6(), model, shifts, 0.5, 1'000'000, 100.0);
        benchmark::DoNotOptimize(profile.data());
    }
}
BENCHMARK(BM_lindeberg_profile)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
