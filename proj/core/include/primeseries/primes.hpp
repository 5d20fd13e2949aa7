#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace primeseries {

// Sorted primes up to an inclusive limit, with O(log n) counting queries.
class PrimeTable {
public:
    // Segmented odd-only bit sieve; segment_bits odd candidates per segment
    // (default 2^20, cache resident).
    static PrimeTable sieve(std::uint64_t limit, std::size_t segment_bits = (1u << 20));

    std::uint64_t limit() const { return limit_; }
    const std::vector<std::uint64_t>& primes() const { return primes_; }

    // Number of primes <= x.  Requires x <= limit().
    std::size_t count(double x) const;

    static PrimeTable from_parts(std::uint64_t limit, std::vector<std::uint64_t> primes);

private:
    PrimeTable() = default;
    std::uint64_t limit_ = 0;
    std::vector<std::uint64_t> primes_;
};

// One P-smooth k-free integer together with its exponent vector over the
// base primes (exponents aligned with SmoothSet::base_primes).
struct SmoothEntry {
    std::uint64_t n;
    std::vector<std::uint8_t> exponents;
};

// All integers whose prime factors are <= P with every exponent <= k-1,
// enumerated exactly once in ascending order; cardinality k^(number of
// primes <= P).
struct SmoothSet {
    std::uint64_t P = 0;
    unsigned k = 0;
    std::vector<std::uint64_t> base_primes;
    std::vector<SmoothEntry> entries;
};

SmoothSet enumerate_smooth_kfree(const PrimeTable& table, std::uint64_t P, unsigned k,
                                 std::size_t enumeration_cap = 1'000'000);

// Binary prime cache: fixed header (magic, version, limit, count) followed by
// LEB128 delta-encoded primes.
void write_prime_cache(const PrimeTable& table, const std::filesystem::path& path);
PrimeTable read_prime_cache(const std::filesystem::path& path);

} // namespace primeseries
