#include "primeseries/harness.hpp"

#include "primeseries/accum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

namespace primeseries {

namespace {

const double kLilBoundary = std::exp(-std::exp(1.0));

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

std::vector<std::uint64_t> primes_up_to(const PrimeTable& table, std::uint64_t P) {
    if (P < 2) throw std::invalid_argument("cutoff must be >= 2");
    if (P > table.limit()) throw std::out_of_range("cutoff beyond sieve limit");
    std::vector<std::uint64_t> out;
    for (std::uint64_t p : table.primes()) {
        if (p > P) break;
        out.push_back(p);
    }
    return out;
}

// Evaluates every replica of a weighted prime sum family: value[r][w] is the
// compensated sum over primes of eta_p * weight_w(p), with replica r drawing
// its noise from stream label r.  The per-replica evaluation order equals the
// partial_series order, so results are bit-identical to direct calls.
std::vector<double> replica_matrix(const std::vector<std::uint64_t>& primes,
                                   const std::vector<std::vector<double>>& weights,
                                   const NoiseModel& model, std::uint64_t master_seed,
                                   int replicas, int threads) {
    const std::size_t m = weights.size();
    std::vector<double> values(static_cast<std::size_t>(replicas) * m);

    int nthreads = threads > 0 ? threads
                               : static_cast<int>(std::thread::hardware_concurrency());
    if (nthreads < 1) nthreads = 1;
    nthreads = std::min(nthreads, replicas);

    auto worker = [&](int begin, int end) {
        std::vector<Accumulator> acc(m);
        for (int r = begin; r < end; ++r) {
            const SeedSpec seed{master_seed, static_cast<std::uint64_t>(r)};
            std::fill(acc.begin(), acc.end(), Accumulator{});
            for (std::size_t i = 0; i < primes.size(); ++i) {
                const double eta = eta_at(seed, model, primes[i]);
                for (std::size_t w = 0; w < m; ++w) acc[w].add(eta * weights[w][i]);
            }
            for (std::size_t w = 0; w < m; ++w)
                values[static_cast<std::size_t>(r) * m + w] = acc[w].value();
        }
    };

    std::vector<std::thread> pool;
    const int chunk = (replicas + nthreads - 1) / nthreads;
    for (int t = 0; t < nthreads; ++t) {
        const int begin = t * chunk;
        const int end = std::min(replicas, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
    return values;
}

} // namespace

FcltReport run_fclt_experiment(const PrimeTable& table, const ExperimentConfig& config) {
    if (config.replicas < 2) throw std::invalid_argument("replicas must be >= 2");
    if (config.grid.empty()) throw std::invalid_argument("time grid must be nonempty");
    for (std::size_t i = 1; i < config.grid.size(); ++i)
        if (!(config.grid[i - 1] <= config.grid[i]))
            throw std::invalid_argument("time grid must be ascending");
    if (!(config.tolerance_multiplier > 0))
        throw std::invalid_argument("tolerance multiplier must be positive");

    const std::vector<std::uint64_t> primes = primes_up_to(table, config.cutoff_P);
    const std::size_t m = config.grid.size();
    const int R = config.replicas;

    FcltReport rep;
    rep.grid = config.grid;
    rep.replicas = R;
    rep.shifts.reserve(m);
    for (double t : config.grid) rep.shifts.push_back(shift_of(config.mode, config.scale, t));

    std::vector<std::vector<double>> weights(m, std::vector<double>(primes.size()));
    for (std::size_t w = 0; w < m; ++w) {
        const double expo = -0.5 - rep.shifts[w];
        for (std::size_t i = 0; i < primes.size(); ++i)
            weights[w][i] = std::pow(static_cast<double>(primes[i]), expo);
    }

    const std::vector<double> values = replica_matrix(primes, weights, config.model,
                                                      config.master_seed, R, config.threads);

    rep.mean.assign(m, 0.0);
    rep.variance.assign(m, 0.0);
    rep.skewness.assign(m, 0.0);
    rep.excess_kurtosis.assign(m, 0.0);
    for (std::size_t w = 0; w < m; ++w) {
        Accumulator sum;
        for (int r = 0; r < R; ++r) sum.add(values[static_cast<std::size_t>(r) * m + w]);
        const double mean = sum.value() / R;
        Accumulator m2, m3, m4;
        for (int r = 0; r < R; ++r) {
            const double d = values[static_cast<std::size_t>(r) * m + w] - mean;
            m2.add(d * d);
            m3.add(d * d * d);
            m4.add(d * d * d * d);
        }
        const double c2 = m2.value() / R;
        rep.mean[w] = mean;
        rep.variance[w] = m2.value() / (R - 1);
        rep.skewness[w] = m3.value() / R / std::pow(c2, 1.5);
        rep.excess_kurtosis[w] = m4.value() / R / (c2 * c2) - 3.0;
    }

    rep.empirical_cov.assign(m * m, 0.0);
    rep.oracle_cov.assign(m * m, 0.0);
    rep.cov_standard_error.assign(m * m, 0.0);
    rep.covariance_pass = true;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) {
            Accumulator prod_sum;
            for (int r = 0; r < R; ++r) {
                const std::size_t row = static_cast<std::size_t>(r) * m;
                prod_sum.add((values[row + i] - rep.mean[i]) * (values[row + j] - rep.mean[j]));
            }
            const double cov = prod_sum.value() / (R - 1);
            const double mean_prod = prod_sum.value() / R;
            Accumulator spread;
            for (int r = 0; r < R; ++r) {
                const std::size_t row = static_cast<std::size_t>(r) * m;
                const double d =
                    (values[row + i] - rep.mean[i]) * (values[row + j] - rep.mean[j]) - mean_prod;
                spread.add(d * d);
            }
            const double se = std::sqrt(spread.value() / (R - 1) / R);
            const double oracle = truncated_covariance(table, config.mode, config.scale,
                                                       config.grid[i], config.grid[j],
                                                       config.cutoff_P);
            rep.empirical_cov[i * m + j] = rep.empirical_cov[j * m + i] = cov;
            rep.oracle_cov[i * m + j] = rep.oracle_cov[j * m + i] = oracle;
            rep.cov_standard_error[i * m + j] = rep.cov_standard_error[j * m + i] = se;
            if (std::abs(cov - oracle) > config.tolerance_multiplier * se)
                rep.covariance_pass = false;
        }
    }

    rep.ks_statistic.assign(m, 0.0);
    rep.ks_threshold = 1.95 / std::sqrt(static_cast<double>(R));
    rep.marginals_pass = true;
    for (std::size_t w = 0; w < m; ++w) {
        std::vector<double> column(static_cast<std::size_t>(R));
        for (int r = 0; r < R; ++r) column[r] = values[static_cast<std::size_t>(r) * m + w];
        rep.ks_statistic[w] = normality_statistic(std::move(column));
        if (rep.ks_statistic[w] > rep.ks_threshold) rep.marginals_pass = false;
    }

    rep.pass = rep.covariance_pass && rep.marginals_pass;
    return rep;
}

double normality_statistic(std::vector<double> samples) {
    const std::size_t n = samples.size();
    if (n < 30) throw std::invalid_argument("normality statistic requires >= 30 samples");

    Accumulator sum;
    for (double v : samples) sum.add(v);
    const double mean = sum.value() / static_cast<double>(n);
    Accumulator sq;
    for (double v : samples) sq.add((v - mean) * (v - mean));
    const double sd = std::sqrt(sq.value() / static_cast<double>(n - 1));

    for (double& v : samples) v = sd > 0 ? (v - mean) / sd : 0.0;
    std::sort(samples.begin(), samples.end());

    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double cdf = normal_cdf(samples[i]);
        d = std::max(d, static_cast<double>(i + 1) / n - cdf);
        d = std::max(d, cdf - static_cast<double>(i) / n);
    }
    return d;
}

double truncated_second_moment(const NoiseModel& model, double c) {
    switch (model.kind) {
        case NoiseKind::rademacher: {
            const double sigma = std::sqrt(model.sigma2);
            return sigma > c ? model.sigma2 : 0.0;
        }
        case NoiseKind::gaussian: {
            const double a = c / std::sqrt(model.sigma2);
            const double phi = 0.3989422804014327 * std::exp(-0.5 * a * a);
            return model.sigma2 * (2.0 * a * phi + std::erfc(a / std::sqrt(2.0)));
        }
        case NoiseKind::centered_uniform: {
            const double h = std::sqrt(3.0 * model.sigma2);
            if (c >= h) return 0.0;
            return (h * h * h - c * c * c) / (3.0 * h);
        }
        case NoiseKind::two_point:
            return model.q * model.a * model.a * (std::abs(model.a) > c ? 1.0 : 0.0) +
                   (1 - model.q) * model.b * model.b * (std::abs(model.b) > c ? 1.0 : 0.0);
    }
    throw std::logic_error("unsupported noise model for closed-form truncation");
}

std::vector<double> lindeberg_profile(const PrimeTable& table, const NoiseModel& model,
                                      const std::vector<double>& shifts, double eps,
                                      std::uint64_t P, double norm) {
    if (!(eps > 0)) throw std::invalid_argument("eps must be positive");
    if (!(norm > 0)) throw std::invalid_argument("norm must be positive");
    const std::vector<std::uint64_t> primes = primes_up_to(table, P);
    const double root_norm = std::sqrt(norm);

    std::vector<double> out;
    out.reserve(shifts.size());
    for (double a : shifts) {
        if (a < 0) throw std::invalid_argument("shifts must be >= 0");
        Accumulator acc;
        for (std::uint64_t p : primes) {
            const double pd = static_cast<double>(p);
            const double weight = std::pow(pd, -1.0 - 2.0 * a);
            const double cutoff = eps * std::pow(pd, 0.5 + a) * root_norm;
            acc.add(weight * truncated_second_moment(model, cutoff));
        }
        out.push_back(acc.value() / norm);
    }
    return out;
}

LilReport run_lil_trace(const PrimeTable& table, const SeedSpec& seed, const NoiseModel& model,
                        std::uint64_t cutoff_P, double gamma, LilBranch branch, int n_begin,
                        int n_end) {
    if (n_begin < 1 || n_end < n_begin) throw std::invalid_argument("bad n range");
    const std::vector<LilTerm> seq = lil_sequence(gamma, branch, n_end);

    LilReport rep;
    rep.gamma = gamma;
    rep.branch = branch;
    rep.n_begin = n_begin;
    rep.n_end = n_end;

    double running_max = std::numeric_limits<double>::quiet_NaN();
    double running_min = std::numeric_limits<double>::quiet_NaN();
    for (int n = n_begin; n <= n_end; ++n) {
        LilRow row;
        row.n = n;
        row.s_n = seq[static_cast<std::size_t>(n) - 1].value;
        if (seq[static_cast<std::size_t>(n) - 1].underflowed) {
            row.excluded = true;
            row.note = "underflowed to zero";
        } else if (row.s_n >= kLilBoundary) {
            row.excluded = true;
            row.note = "outside normalizer domain";
        } else {
            row.g_truncated = truncated_variance(table, row.s_n, cutoff_P, model.sigma2);
            const double l3 = std::log(std::log(-std::log(row.s_n)));
            row.normalizer = 1.0 / std::sqrt(2.0 * row.g_truncated * l3);
            const SeriesQuery q{row.s_n, cutoff_P, seed, model};
            row.normalized = row.normalizer * partial_series(table, q);
            running_max = std::isnan(running_max) ? row.normalized
                                                  : std::max(running_max, row.normalized);
            running_min = std::isnan(running_min) ? row.normalized
                                                  : std::min(running_min, row.normalized);
        }
        row.running_max = running_max;
        row.running_min = running_min;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

std::vector<LilVarianceRow> run_lil_variance(const PrimeTable& table, std::uint64_t master_seed,
                                             const NoiseModel& model, std::uint64_t cutoff_P,
                                             double gamma, LilBranch branch, int n_begin,
                                             int n_end, int replicas,
                                             double tolerance_multiplier) {
    if (n_begin < 1 || n_end < n_begin) throw std::invalid_argument("bad n range");
    if (replicas < 2) throw std::invalid_argument("replicas must be >= 2");
    const std::vector<LilTerm> seq = lil_sequence(gamma, branch, n_end);
    const std::vector<std::uint64_t> primes = primes_up_to(table, cutoff_P);

    std::vector<int> ns;
    std::vector<double> s_values;
    for (int n = n_begin; n <= n_end; ++n) {
        const LilTerm& term = seq[static_cast<std::size_t>(n) - 1];
        if (term.underflowed || term.value >= kLilBoundary)
            throw std::domain_error("s_n outside the normalizer domain at n = " +
                                    std::to_string(n));
        ns.push_back(n);
        s_values.push_back(term.value);
    }

    const std::size_t m = ns.size();
    std::vector<std::vector<double>> weights(m, std::vector<double>(primes.size()));
    for (std::size_t w = 0; w < m; ++w) {
        const double expo = -0.5 - s_values[w];
        for (std::size_t i = 0; i < primes.size(); ++i)
            weights[w][i] = std::pow(static_cast<double>(primes[i]), expo);
    }

    const std::vector<double> values =
        replica_matrix(primes, weights, model, master_seed, replicas, 0);

    std::vector<LilVarianceRow> rows;
    rows.reserve(m);
    for (std::size_t w = 0; w < m; ++w) {
        const double g = truncated_variance(table, s_values[w], cutoff_P, model.sigma2);
        const double l3 = std::log(std::log(-std::log(s_values[w])));
        const double normalizer = 1.0 / std::sqrt(2.0 * g * l3);

        Accumulator sum;
        for (int r = 0; r < replicas; ++r)
            sum.add(normalizer * values[static_cast<std::size_t>(r) * m + w]);
        const double mean = sum.value() / replicas;
        Accumulator m2, m4;
        for (int r = 0; r < replicas; ++r) {
            const double d = normalizer * values[static_cast<std::size_t>(r) * m + w] - mean;
            m2.add(d * d);
            m4.add(d * d * d * d);
        }
        const double c2 = m2.value() / replicas;
        const double c4 = m4.value() / replicas;
        const double R = replicas;

        LilVarianceRow row;
        row.n = ns[w];
        row.s_n = s_values[w];
        row.sample_variance = m2.value() / (R - 1);
        row.target = 1.0 / (2.0 * l3);
        row.standard_error = std::sqrt(std::max(0.0, c4 - c2 * c2 * (R - 3) / (R - 1)) / R);
        row.pass = std::abs(row.sample_variance - row.target) <=
                   tolerance_multiplier * row.standard_error;
        rows.push_back(row);
    }
    return rows;
}

CorollaryReport run_corollary_experiment(const PrimeTable& table, const SeedSpec& seed,
                                         const std::vector<double>& s_grid, std::uint64_t P,
                                         unsigned k) {
    if (s_grid.empty()) throw std::invalid_argument("s grid must be nonempty");

    CorollaryReport rep;
    rep.P = P;
    rep.k = k;
    const double sign = (k == 2) ? 1.0 : -1.0;
    const double log_P = std::log(static_cast<double>(P));

    for (double s : s_grid) {
        CorollaryRow row;
        row.decomposition = log_decomposition(table, seed, s, P, k);
        row.half_log_zeta = 0.5 * std::log(zeta_series(1.0 + 2.0 * s));
        row.tail_estimate = exp_integral_e1(2.0 * s * log_P);
        row.o1_track = sign * (row.half_log_zeta - row.decomposition.half_variance_sum -
                               0.5 * row.tail_estimate);
        row.o1_track_truncated =
            sign * (row.half_log_zeta - row.decomposition.half_variance_sum);
        rep.max_residual = std::max(rep.max_residual, row.decomposition.residual);
        rep.max_abs_track = std::max(rep.max_abs_track, std::abs(row.o1_track));
        rep.rows.push_back(std::move(row));
    }
    rep.bounded = rep.max_abs_track <= 1.0;
    return rep;
}

bool covariance_psd(const std::vector<double>& matrix, std::size_t dim, double tolerance) {
    if (matrix.size() != dim * dim) throw std::invalid_argument("matrix size mismatch");
    std::vector<double> work = matrix;
    std::vector<std::size_t> idx(dim);
    std::iota(idx.begin(), idx.end(), 0);
    auto at = [&](std::size_t r, std::size_t c) -> double& { return work[idx[r] * dim + idx[c]]; };

    for (std::size_t j = 0; j < dim; ++j) {
        std::size_t best = j;
        for (std::size_t r = j + 1; r < dim; ++r)
            if (at(r, r) > at(best, best)) best = r;
        std::swap(idx[j], idx[best]);

        const double pivot = at(j, j);
        if (pivot < -tolerance) return false;
        if (pivot <= tolerance) {
            for (std::size_t r = j; r < dim; ++r)
                if (at(r, r) < -tolerance) return false;
            return true;
        }
        const double root = std::sqrt(pivot);
        std::vector<double> col(dim - j - 1);
        for (std::size_t r = j + 1; r < dim; ++r) col[r - j - 1] = at(r, j) / root;
        for (std::size_t r = j + 1; r < dim; ++r)
            for (std::size_t c = j + 1; c <= r; ++c) {
                const double update = col[r - j - 1] * col[c - j - 1];
                at(r, c) -= update;
                if (r != c) at(c, r) -= update;
            }
    }
    return true;
}

} // namespace primeseries

