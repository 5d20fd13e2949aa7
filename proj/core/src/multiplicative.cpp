#include "primeseries/multiplicative.hpp"

#include "primeseries/accum.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace primeseries {

MultTable::MultTable(SeedSpec seed, std::uint64_t N, unsigned k) : N_(N), k_(k), seed_(seed) {
    if (N < 1) throw std::invalid_argument("table bound must be >= 1");
    if (k < 2) throw std::invalid_argument("freeness order k must be >= 2");
    if (N > UINT32_MAX) throw std::invalid_argument("table bound exceeds spf sieve range");

    spf_.assign(static_cast<std::size_t>(N) + 1, 0);
    for (std::uint64_t i = 2; i <= N; ++i) {
        if (spf_[i] != 0) continue;
        for (std::uint64_t j = i; j <= N; j += i)
            if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
    }

    values_.assign(static_cast<std::size_t>(N) + 1, 0);
    values_[1] = 1;
    for (std::uint64_t n = 2; n <= N; ++n) {
        const std::uint64_t p = spf_[n];
        std::uint64_t m = n;
        unsigned e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        if (e >= k_ || values_[m] == 0) {
            values_[n] = 0;
            continue;
        }
        const int sign_p = (n == p) ? sign_at(seed_, p) : values_[p];
        values_[n] = static_cast<std::int8_t>(values_[m] * ((e % 2 == 1) ? sign_p : 1));
    }
}

int MultTable::f(std::uint64_t n) const {
    if (n < 1 || n > N_) throw std::out_of_range("argument beyond table bound");
    return values_[n];
}

std::uint32_t MultTable::smallest_prime_factor(std::uint64_t n) const {
    if (n < 2 || n > N_) throw std::out_of_range("argument beyond table bound");
    return spf_[n];
}

double f_partial_sum(const MultTable& table, double s) {
    if (!(s > 0)) throw std::invalid_argument("shift s must be positive");
    const double expo = -0.5 - s;
    Accumulator acc;
    for (std::uint64_t n = 1; n <= table.bound(); ++n) {
        const int fn = table.f(n);
        if (fn == 0) continue;
        acc.add(fn * std::pow(static_cast<double>(n), expo));
    }
    return acc.value();
}

namespace {

void check_product_args(const PrimeTable& table, double s, std::uint64_t P, unsigned k) {
    if (!(s > 0)) throw std::invalid_argument("shift s must be positive");
    if (P < 2) throw std::invalid_argument("cutoff must be >= 2");
    if (P > table.limit()) throw std::out_of_range("cutoff beyond sieve limit");
    if (k < 2) throw std::invalid_argument("freeness order k must be >= 2");
}

// Horner evaluation of sum_{l=1}^{k-1} x^l; adding 1 gives the local factor.
double factor_tail(double x, unsigned k) {
    double y = 0.0;
    for (unsigned l = 1; l < k; ++l) y = x * (1.0 + y);
    return y;
}

} // namespace

EulerProduct euler_product(const PrimeTable& table, const SeedSpec& seed, double s,
                           std::uint64_t P, unsigned k) {
    check_product_args(table, s, P, k);
    const double expo = -0.5 - s;
    EulerProduct out;
    for (std::uint64_t p : table.primes()) {
        if (p > P) break;
        const double x = sign_at(seed, p) * std::pow(static_cast<double>(p), expo);
        const double factor = 1.0 + factor_tail(x, k);
        if (factor <= 0 && !out.nonpositive_factor_p) out.nonpositive_factor_p = p;
        out.value *= factor;
    }
    return out;
}

double smooth_expansion_sum(const PrimeTable& table, const SeedSpec& seed, double s,
                            std::uint64_t P, unsigned k, std::size_t enumeration_cap) {
    check_product_args(table, s, P, k);
    const SmoothSet set = enumerate_smooth_kfree(table, P, k, enumeration_cap);
    const double expo = -0.5 - s;
    Accumulator acc;
    for (const SmoothEntry& entry : set.entries) {
        int fn = 1;
        for (std::size_t i = 0; i < set.base_primes.size(); ++i)
            if (entry.exponents[i] % 2 == 1) fn *= sign_at(seed, set.base_primes[i]);
        acc.add(fn * std::pow(static_cast<double>(entry.n), expo));
    }
    return acc.value();
}

double remainder_R(const PrimeTable& table, const SeedSpec& seed, double s, std::uint64_t P) {
    check_product_args(table, s, P, 2);
    const double expo = -0.5 - s;
    Accumulator acc;
    for (std::uint64_t p : table.primes()) {
        if (p > P) break;
        const double x = sign_at(seed, p) * std::pow(static_cast<double>(p), expo);
        acc.add(std::log1p(x) - x + 0.5 * x * x);
    }
    return acc.value();
}

double remainder_R_star(const PrimeTable& table, const SeedSpec& seed, double s,
                        std::uint64_t P, unsigned k) {
    if (k < 3) throw std::invalid_argument("remainder_R_star requires k >= 3");
    check_product_args(table, s, P, k);
    const double expo = -0.5 - s;
    Accumulator acc;
    for (std::uint64_t p : table.primes()) {
        if (p > P) break;
        const double pd = static_cast<double>(p);
        const double x = sign_at(seed, p) * std::pow(pd, expo);
        const double tail = factor_tail(x, k);
        if (1.0 + tail <= 0)
            throw std::runtime_error("nonpositive Euler factor at p = " + std::to_string(p));
        acc.add(std::log1p(tail) - x - 0.5 * std::pow(pd, -1.0 - 2.0 * s));
    }
    return acc.value();
}

double remainder_bound(const PrimeTable& table, std::uint64_t P) {
    if (P < 2) throw std::invalid_argument("cutoff must be >= 2");
    if (P > table.limit()) throw std::out_of_range("cutoff beyond sieve limit");
    Accumulator acc;
    for (std::uint64_t p : table.primes()) {
        if (p > P) break;
        acc.add(std::pow(static_cast<double>(p), -1.5));
    }
    const double pd = static_cast<double>(P);
    const double tail = 2.0 / (std::sqrt(pd) * std::log(pd));
    const double constant = std::sqrt(2.0) / (std::sqrt(2.0) - 1.0);
    return constant * (acc.value() + tail);
}

DecompositionReport log_decomposition(const PrimeTable& table, const SeedSpec& seed, double s,
                                      std::uint64_t P, unsigned k) {
    check_product_args(table, s, P, k);
    const double expo = -0.5 - s;

    DecompositionReport rep;
    rep.s = s;
    rep.P = P;
    rep.k = k;

    Accumulator log_product;
    Accumulator prime_sum;
    Accumulator variance_sum;
    for (std::uint64_t p : table.primes()) {
        if (p > P) break;
        const double pd = static_cast<double>(p);
        const double x = sign_at(seed, p) * std::pow(pd, expo);
        const double tail = factor_tail(x, k);
        if (1.0 + tail <= 0)
            throw std::runtime_error("nonpositive Euler factor at p = " + std::to_string(p));
        log_product.add(std::log1p(tail));
        prime_sum.add(x);
        variance_sum.add(std::pow(pd, -1.0 - 2.0 * s));
    }
    rep.log_product = log_product.value();
    rep.prime_sum = prime_sum.value();
    rep.half_variance_sum = 0.5 * variance_sum.value();
    rep.remainder = (k == 2) ? remainder_R(table, seed, s, P)
                             : remainder_R_star(table, seed, s, P, k);
    const double sign = (k == 2) ? 1.0 : -1.0;
    rep.residual = std::abs(rep.log_product + sign * rep.half_variance_sum - rep.prime_sum -
                            rep.remainder);
    if (k == 2) {
        rep.bound = remainder_bound(table, P);
        rep.has_bound = true;
    }
    return rep;
}

} // namespace primeseries
