#include <primeseries/primes.hpp>

#include <benchmark/benchmark.h>

#include <cstdint>
#include <filesystem>

using namespace primeseries;

namespace {

void BM_sieve(benchmark::State& state) {
    const auto limit = std::uint64_t(state.range(0));
    for (auto _ : state) {
        const PrimeTable table = PrimeTable::sieve(limit);
        benchmark::DoNotOptimize(table.primes().data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_sieve)->Arg(100'000)->Arg(1'000'000)->Arg(10'000'000)->Unit(benchmark::kMillisecond);

void BM_cache_write(benchmark::State& state) {
    const PrimeTable table = PrimeTable::sieve(std::uint64_t(state.range(0)));
    const auto path = std::filesystem::temp_directory_path() / "primeseries_bench_write.cache";
    for (auto _ : state) write_prime_cache(table, path);
    std::filesystem::remove(path);
}
BENCHMARK(BM_cache_write)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

void BM_cache_read(benchmark::State& state) {
    const PrimeTable table = PrimeTable::sieve(std::uint64_t(state.range(0)));
    const auto path = std::filesystem::temp_directory_path() / "primeseries_bench_read.cache";
    write_prime_cache(table, path);
    for (auto _ : state) {
        const PrimeTable back = read_prime_cache(path);
        benchmark::DoNotOptimize(back.primes().data());
    }
    std::filesystem::remove(path);
}
BENCHMARK(BM_cache_read)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

void BM_smooth_enumeration(benchmark::State& state) {
    const PrimeTable table = PrimeTable::sieve(100);
    const auto k = unsigned(state.range(0));
    for (auto _ : state) {
        const SmoothSet set = enumerate_smooth_kfree(table, 13, k);
        benchmark::DoNotOptimize(set.entries.data());
    }
}
BENCHMARK(BM_smooth_enumeration)->Arg(2)->Arg(3)->Arg(4);

} // namespace
