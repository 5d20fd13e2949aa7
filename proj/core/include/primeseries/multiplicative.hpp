#pragma once

#include "primeseries/noise.hpp"
#include "primeseries/primes.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace primeseries {

// Values of a k-free random multiplicative function for n <= N, built from
// per-prime signs via a smallest-prime-factor sieve.  f(1) = 1; f vanishes
// exactly off the k-free integers; on its support f is the product of the
// per-prime signs raised to the prime exponents.
class MultTable {
public:
    MultTable(SeedSpec seed, std::uint64_t N, unsigned k);

    std::uint64_t bound() const { return N_; }
    unsigned order() const { return k_; }
    const SeedSpec& seed() const { return seed_; }

    int f(std::uint64_t n) const;
    std::uint32_t smallest_prime_factor(std::uint64_t n) const;

private:
    std::uint64_t N_;
    unsigned k_;
    SeedSpec seed_;
    std::vector<std::int8_t> values_; // index n, 1-based; values_[0] unused
    std::vector<std::uint32_t> spf_;
};

inline MultTable sieve_multiplicative(const SeedSpec& seed, std::uint64_t N, unsigned k) {
    return MultTable(seed, N, k);
}

// Sum of f(n) * n^(-1/2-s) over n <= N, ascending, compensated.
double f_partial_sum(const MultTable& table, double s);

struct EulerProduct {
    double value = 1.0;
    // First prime whose factor is <= 0 (possible only for k >= 3); the
    // product value is still reported, but its logarithm is undefined.
    std::optional<std::uint64_t> nonpositive_factor_p;
};

// Product over p <= P of sum_{l=0}^{k-1} (f(p) p^(-1/2-s))^l.
EulerProduct euler_product(const PrimeTable& table, const SeedSpec& seed, double s,
                           std::uint64_t P, unsigned k);

// The same quantity expanded over the P-smooth k-free support; exact finite
// counterpart of the Euler product and its test oracle.
double smooth_expansion_sum(const PrimeTable& table, const SeedSpec& seed, double s,
                            std::uint64_t P, unsigned k,
                            std::size_t enumeration_cap = 1'000'000);

// Square-free remainder: sum over p <= P of log(1+x_p) - x_p + x_p^2/2 with
// x_p = f(p) p^(-1/2-s).
double remainder_R(const PrimeTable& table, const SeedSpec& seed, double s, std::uint64_t P);

// k-free remainder (k >= 3): sum over p <= P of log(S_p) - x_p - p^(-1-2s)/2
// with S_p = sum_{l<k} x_p^l.
double remainder_R_star(const PrimeTable& table, const SeedSpec& seed, double s,
                        std::uint64_t P, unsigned k);

// Uniform bound for |remainder_R|: sqrt(2)/(sqrt(2)-1) times the p^(-3/2)
// prime sum up to P plus an integral tail estimate for the rest.
double remainder_bound(const PrimeTable& table, std::uint64_t P);

struct DecompositionReport {
    double s = 0.0;
    std::uint64_t P = 0;
    unsigned k = 2;
    double log_product = 0.0;
    double prime_sum = 0.0;        // sum of f(p) p^(-1/2-s)
    double half_variance_sum = 0.0; // half of sum of p^(-1-2s)
    double remainder = 0.0;
    double residual = 0.0; // defect of the exact finite identity
    double bound = 0.0;    // set for k = 2 only
    bool has_bound = false;
};

// Exact finite-cutoff identity behind the log decomposition:
//   k  = 2: log_product + half_variance_sum = prime_sum + remainder
//   k >= 3: log_product - half_variance_sum = prime_sum + remainder
DecompositionReport log_decomposition(const PrimeTable& table, const SeedSpec& seed, double s,
                                      std::uint64_t P, unsigned k);

} // namespace primeseries
