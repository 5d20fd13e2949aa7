#pragma once

#include <cstdint>

namespace primeseries {

enum class NoiseKind { rademacher, gaussian, centered_uniform, two_point };

// Law of the per-prime variable: mean exactly 0, variance exactly sigma2.
struct NoiseModel {
    NoiseKind kind = NoiseKind::rademacher;
    double sigma2 = 1.0;
    // two_point support {a, b} with P(a) = q, P(b) = 1-q.
    double a = 0.0;
    double b = 0.0;
    double q = 0.0;

    static NoiseModel rademacher(double sigma2 = 1.0);
    static NoiseModel gaussian(double sigma2 = 1.0);
    static NoiseModel centered_uniform(double sigma2 = 1.0);
    // Validates q*a + (1-q)*b = 0; sigma2 is derived as q*a^2 + (1-q)*b^2.
    static NoiseModel two_point(double a, double b, double q);
};

// Identical (master_seed, stream_label, prime) always yields the identical
// realization, independent of cutoff and evaluation order.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_label = 0;
};

// Deterministic realization of the variable attached to prime p.
double eta_at(const SeedSpec& seed, const NoiseModel& model, std::uint64_t p);

// Rademacher sign; equals eta_at with the rademacher model at sigma2 = 1.
int sign_at(const SeedSpec& seed, std::uint64_t p);

namespace detail {

// 64-bit avalanche mix of (master_seed, stream_label, p); p keyed by value.
std::uint64_t mix_bits(const SeedSpec& seed, std::uint64_t p);

// Uniform in the open interval (0, 1); 53 significand bits.
double uniform01(std::uint64_t bits);

// Standard normal quantile, rational approximation, |error| well below 1e-9.
double normal_quantile(double u);

} // namespace detail

} // namespace primeseries
