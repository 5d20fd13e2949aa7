#pragma once

#include "primeseries/noise.hpp"
#include "primeseries/primes.hpp"

#include <cstdint>
#include <vector>

namespace primeseries {

// One evaluation of the random series at shift s, truncated at cutoff_P.
struct SeriesQuery {
    double s = 0.0;
    std::uint64_t cutoff_P = 2;
    SeedSpec seed;
    NoiseModel model;
};

// Time-changed family of shifts: power mode evaluates base^t, exponential
// mode evaluates exp(-t*scale).
enum class PathMode { power, exponential };

struct PathQuery {
    PathMode mode = PathMode::exponential;
    double scale = 1.0; // base s in power mode, S in exponential mode
    std::vector<double> grid;
    std::uint64_t cutoff_P = 2;
    SeedSpec seed;
    NoiseModel model;
};

// Variance of the truncated series plus a prime-density tail estimate,
// against the logarithmic asymptote.
struct VarianceBreakdown {
    double partial = 0.0;
    double tail_estimate = 0.0;
    double total = 0.0;
    double asymptote = 0.0;
    double ratio = 0.0;
};

struct LilTerm {
    double value = 0.0;
    bool underflowed = false;
};

enum class LilBranch { minus, plus };

// The shift map shared by both path modes; both modes are evaluated through
// exp so that power base s and exponential scale log(1/s) produce identical
// shifts bit for bit.
double shift_of(PathMode mode, double scale, double t);

// Sum of eta_p * p^(-1/2-s) over p <= cutoff, ascending, compensated.
double partial_series(const PrimeTable& table, const SeriesQuery& q);

// sigma2 * sum of p^(-1-2s) over p <= P.  s = 0 is accepted (diagnostic).
double truncated_variance(const PrimeTable& table, double s, std::uint64_t P, double sigma2);

// Exponential integral E1(x), relative error <= 1e-10.
double exp_integral_e1(double x);

// Truncated variance plus the prime-density tail sigma2*E1(2s*log P),
// compared against sigma2*log(1/s).
VarianceBreakdown g_hybrid(const PrimeTable& table, double s, std::uint64_t P, double sigma2);

// Exact covariance of the truncated processes at times t1, t2 under any
// unit-variance model: sum of p^(-1 - shift(t1) - shift(t2)) over p <= P.
double truncated_covariance(const PrimeTable& table, PathMode mode, double scale,
                            double t1, double t2, std::uint64_t P);

// Prime-density tail estimate E1((shift(t1)+shift(t2))*log P) completing the
// truncated covariance; used on the analytic track only.
double covariance_tail_estimate(PathMode mode, double scale, double t1, double t2,
                                std::uint64_t P);

// Normalized path values: series at shift(t) divided by the square root of
// the truncated variance at the unit time, identical realizations across t.
std::vector<double> path_sample(const PrimeTable& table, const PathQuery& pq);

// Riemann zeta for r > 1: direct terms plus Euler-Maclaurin tail.
double zeta_series(double r);

// (2*sigma2*log(1/s)*logloglog(1/s))^(-1/2); domain 0 < s < e^-e.
double lil_normalizer(double s, double sigma2);

// s_n = exp(-exp(n^(1-gamma))) (minus branch) or exp(-exp(n^(1+gamma)))
// (plus branch), n = 1..n_max; entries that underflow to zero are flagged.
std::vector<LilTerm> lil_sequence(double gamma, LilBranch branch, int n_max);

// Random walk over primes: sum of eta_p for p <= x.
double prime_walk(const PrimeTable& table, const SeedSpec& seed, const NoiseModel& model,
                  double x);

} // namespace primeseries
