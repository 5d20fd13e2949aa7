#include "primeseries/primes.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

namespace primeseries {

namespace {

// Plain sieve used for the base primes up to sqrt(limit).
std::vector<std::uint64_t> simple_sieve(std::uint64_t limit) {
    std::vector<std::uint64_t> out;
    if (limit < 2) return out;
    std::vector<bool> composite(limit + 1, false);
    for (std::uint64_t i = 2; i * i <= limit; ++i) {
        if (composite[i]) continue;
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    for (std::uint64_t i = 2; i <= limit; ++i)
        if (!composite[i]) out.push_back(i);
    return out;
}

} // namespace

PrimeTable PrimeTable::sieve(std::uint64_t limit, std::size_t segment_bits) {
    if (limit < 2) throw std::invalid_argument("sieve limit must be >= 2");
    if (segment_bits == 0) throw std::invalid_argument("segment size must be positive");

    PrimeTable table;
    table.limit_ = limit;
    table.primes_.push_back(2);
    if (limit == 2) return table;

    const std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit)));
    const std::vector<std::uint64_t> base = simple_sieve(root);

    // Reserve using pi(x) ~ x/log(x) with slack.
    const double est = static_cast<double>(limit) / std::log(static_cast<double>(limit));
    table.primes_.reserve(static_cast<std::size_t>(est * 1.15) + 16);

    // Each segment covers segment_bits odd candidates: bit i of the mask is
    // the number seg_lo + 2*i.
    const std::uint64_t span = 2 * static_cast<std::uint64_t>(segment_bits);
    std::vector<std::uint64_t> mask((segment_bits + 63) / 64);

    for (std::uint64_t seg_lo = 3; seg_lo <= limit; seg_lo += span) {
        const std::uint64_t seg_hi = std::min(limit, seg_lo + span - 2);
        const std::size_t nbits = static_cast<std::size_t>((seg_hi - seg_lo) / 2) + 1;
        std::fill(mask.begin(), mask.end(), 0);

        for (std::uint64_t q : base) {
            if (q == 2) continue;
            if (q * q > seg_hi) break;
            std::uint64_t start = std::max(q * q, ((seg_lo + q - 1) / q) * q);
            if (start % 2 == 0) start += q;
            for (std::uint64_t m = start; m <= seg_hi; m += 2 * q) {
                const std::size_t bit = static_cast<std::size_t>((m - seg_lo) / 2);
                mask[bit >> 6] |= 1ull << (bit & 63);
            }
        }

        for (std::size_t bit = 0; bit < nbits; ++bit) {
            if (!(mask[bit >> 6] & (1ull << (bit & 63))))
                table.primes_.push_back(seg_lo + 2 * bit);
        }
    }
    return table;
}

PrimeTable PrimeTable::from_parts(std::uint64_t limit, std::vector<std::uint64_t> primes) {
    PrimeTable table;
    table.limit_ = limit;
    table.primes_ = std::move(primes);
    return table;
}

std::size_t PrimeTable::count(double x) const {
    if (x > static_cast<double>(limit_))
        throw std::out_of_range("prime count query beyond sieve limit");
    auto it = std::upper_bound(primes_.begin(), primes_.end(), x,
                               [](double v, std::uint64_t p) { return v < static_cast<double>(p); });
    return static_cast<std::size_t>(it - primes_.begin());
}

SmoothSet enumerate_smooth_kfree(const PrimeTable& table, std::uint64_t P, unsigned k,
                                 std::size_t enumeration_cap) {
    if (P > table.limit()) throw std::out_of_range("smoothness bound beyond sieve limit");
    if (k < 2) throw std::invalid_argument("freeness order k must be >= 2");

    SmoothSet set;
    set.P = P;
    set.k = k;
    for (std::uint64_t p : table.primes()) {
        if (p > P) break;
        set.base_primes.push_back(p);
    }

    const std::size_t r = set.base_primes.size();
    double cardinality = 1.0;
    for (std::size_t i = 0; i < r; ++i) {
        cardinality *= static_cast<double>(k);
        if (cardinality > static_cast<double>(enumeration_cap))
            throw std::length_error("smooth set cardinality k^rho(P) = " +
                                    std::to_string(cardinality) + " exceeds enumeration cap " +
                                    std::to_string(enumeration_cap));
    }

    set.entries.push_back({1, std::vector<std::uint8_t>(r, 0)});
    for (std::size_t i = 0; i < r; ++i) {
        const std::uint64_t p = set.base_primes[i];
        const std::size_t existing = set.entries.size();
        for (std::size_t j = 0; j < existing; ++j) {
            std::uint64_t n = set.entries[j].n;
            for (unsigned e = 1; e < k; ++e) {
                if (n > UINT64_MAX / p)
                    throw std::overflow_error("smooth entry exceeds 64-bit range");
                n *= p;
                SmoothEntry entry = set.entries[j];
                entry.n = n;
                entry.exponents[i] = static_cast<std::uint8_t>(e);
                set.entries.push_back(std::move(entry));
            }
        }
    }
    std::sort(set.entries.begin(), set.entries.end(),
              [](const SmoothEntry& a, const SmoothEntry& b) { return a.n < b.n; });
    return set;
}

namespace {

constexpr std::uint32_t kCacheMagic = 0x50524D43; // "PRMC"
constexpr std::uint32_t kCacheVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) throw std::runtime_error("prime cache truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    if (!is) throw std::runtime_error("prime cache truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

void put_varint(std::string& buf, std::uint64_t v) {
    while (v >= 0x80) {
        buf.push_back(static_cast<char>((v & 0x7F) | 0x80));
        v >>= 7;
    }
    buf.push_back(static_cast<char>(v));
}

std::uint64_t get_varint(std::istream& is) {
    std::uint64_t v = 0;
    int shift = 0;
    while (true) {
        const int c = is.get();
        if (c == EOF) throw std::runtime_error("prime cache truncated");
        v |= static_cast<std::uint64_t>(c & 0x7F) << shift;
        if (!(c & 0x80)) break;
        shift += 7;
        if (shift > 63) throw std::runtime_error("prime cache delta overflow");
    }
    return v;
}

} // namespace

void write_prime_cache(const PrimeTable& table, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open prime cache for writing: " + path.string());
    put_u32(os, kCacheMagic);
    put_u32(os, kCacheVersion);
    put_u64(os, table.limit());
    put_u64(os, table.primes().size());

    std::string payload;
    payload.reserve(table.primes().size() + 16);
    std::uint64_t prev = 0;
    for (std::uint64_t p : table.primes()) {
        put_varint(payload, p - prev);
        prev = p;
    }
    os.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!os) throw std::runtime_error("prime cache write failed: " + path.string());
}

PrimeTable read_prime_cache(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open prime cache: " + path.string());
    if (get_u32(is) != kCacheMagic) throw std::runtime_error("prime cache magic mismatch");
    if (get_u32(is) != kCacheVersion) throw std::runtime_error("prime cache version mismatch");
    const std::uint64_t limit = get_u64(is);
    const std::uint64_t count = get_u64(is);

    std::vector<std::uint64_t> primes;
    primes.reserve(count);
    std::uint64_t prev = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint64_t delta = get_varint(is);
        const std::uint64_t p = prev + delta;
        if (p <= prev && i > 0) throw std::runtime_error("prime cache not ascending");
        if (p > limit) throw std::runtime_error("prime cache entry beyond limit");
        primes.push_back(p);
        prev = p;
    }
    if (primes.empty() || primes.front() < 2)
        throw std::runtime_error("prime cache content invalid");
    return PrimeTable::from_parts(limit, std::move(primes));
}

} // namespace primeseries
