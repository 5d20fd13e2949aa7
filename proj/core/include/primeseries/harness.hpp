#pragma once

#include "primeseries/dirichlet.hpp"
#include "primeseries/multiplicative.hpp"
#include "primeseries/noise.hpp"
#include "primeseries/primes.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace primeseries {

// Master seed recorded for the shipped experiment configurations; replica r
// of an experiment uses stream label r under this master seed.
inline constexpr std::uint64_t kShippedMasterSeed = 1;

struct ExperimentConfig {
    int replicas = 2000;
    std::uint64_t cutoff_P = 10'000'000;
    PathMode mode = PathMode::exponential;
    double scale = 10.0;
    std::vector<double> grid{0.25, 0.5, 1.0};
    NoiseModel model = NoiseModel::rademacher(1.0);
    std::uint64_t master_seed = kShippedMasterSeed;
    double tolerance_multiplier = 4.0; // standard errors
    int threads = 0;                   // 0 = hardware concurrency
};

// Square matrices stored row-major over the time grid.
struct FcltReport {
    std::vector<double> grid;
    std::vector<double> shifts;
    int replicas = 0;
    std::vector<double> mean;
    std::vector<double> variance; // sample variance, unnormalized values
    std::vector<double> skewness;
    std::vector<double> excess_kurtosis;
    std::vector<double> empirical_cov;
    std::vector<double> oracle_cov;
    std::vector<double> cov_standard_error;
    std::vector<double> ks_statistic;
    double ks_threshold = 0.0;
    bool covariance_pass = false;
    bool marginals_pass = false;
    bool pass = false;
};

FcltReport run_fclt_experiment(const PrimeTable& table, const ExperimentConfig& config);

// Kolmogorov-Smirnov distance between the standardized empirical CDF of the
// samples and the standard normal CDF.  Requires at least 30 samples.
double normality_statistic(std::vector<double> samples);

// Lindeberg profile: for each shift a, (1/norm) * sum over p <= P of
// p^(-1-2a) * E[eta^2; |eta| > eps * p^(1/2+a) * sqrt(norm)], using exact
// truncated second moments per model.
std::vector<double> lindeberg_profile(const PrimeTable& table, const NoiseModel& model,
                                      const std::vector<double>& shifts, double eps,
                                      std::uint64_t P, double norm);

// Exact truncated second moment E[eta^2; |eta| > c] for the model.
double truncated_second_moment(const NoiseModel& model, double c);

struct LilRow {
    int n = 0;
    double s_n = 0.0;
    bool excluded = false;   // underflowed, or outside the normalizer domain
    std::string note;
    double g_truncated = 0.0;
    double normalizer = 0.0;
    double normalized = 0.0;
    double running_max = 0.0;
    double running_min = 0.0;
};

struct LilReport {
    double gamma = 0.5;
    LilBranch branch = LilBranch::minus;
    int n_begin = 1;
    int n_end = 1;
    double envelope = 1.0;
    std::vector<LilRow> rows;
};

// Single-realization trace along s_n with the truncated normalizer
// (2 * g_P(s_n) * logloglog(1/s_n))^(-1/2); running extremes over the
// included rows.
LilReport run_lil_trace(const PrimeTable& table, const SeedSpec& seed, const NoiseModel& model,
                        std::uint64_t cutoff_P, double gamma, LilBranch branch, int n_begin,
                        int n_end);

struct LilVarianceRow {
    int n = 0;
    double s_n = 0.0;
    double sample_variance = 0.0;
    double target = 0.0; // 1 / (2 logloglog(1/s_n))
    double standard_error = 0.0;
    bool pass = false;
};

// Monte Carlo check that the truncated-normalized value has variance
// 1/(2 logloglog(1/s_n)) at each n; replica r uses stream label r.
std::vector<LilVarianceRow> run_lil_variance(const PrimeTable& table, std::uint64_t master_seed,
                                             const NoiseModel& model, std::uint64_t cutoff_P,
                                             double gamma, LilBranch branch, int n_begin,
                                             int n_end, int replicas,
                                             double tolerance_multiplier = 4.0);

struct CorollaryRow {
    DecompositionReport decomposition;
    double half_log_zeta = 0.0;
    double tail_estimate = 0.0;     // prime-density completion of the variance sum
    double o1_track = 0.0;          // with the completed prime sum
    double o1_track_truncated = 0.0;
};

struct CorollaryReport {
    std::uint64_t P = 0;
    unsigned k = 2;
    std::vector<CorollaryRow> rows;
    double max_residual = 0.0;
    double max_abs_track = 0.0;
    bool bounded = false; // all |o1_track| <= 1
};

// Confronts the log decomposition with the zeta form of the identity on an
// s-grid and follows the O(1) discrepancy term.
CorollaryReport run_corollary_experiment(const PrimeTable& table, const SeedSpec& seed,
                                         const std::vector<double>& s_grid, std::uint64_t P,
                                         unsigned k);

// Pivoted Cholesky check that a symmetric matrix is positive semidefinite up
// to -tolerance on the pivots.
bool covariance_psd(const std::vector<double>& matrix, std::size_t dim, double tolerance);

} // namespace primeseries
