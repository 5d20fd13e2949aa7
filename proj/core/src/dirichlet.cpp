#include "primeseries/dirichlet.hpp"

#include "primeseries/accum.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace primeseries {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

// Boundary of the LIL normalizer domain: logloglog(1/s) > 0 iff s < e^-e.
const double kLilBoundary = std::exp(-std::exp(1.0));

void check_cutoff(const PrimeTable& table, std::uint64_t P) {
    if (P < 2) throw std::invalid_argument("cutoff must be >= 2");
    if (P > table.limit()) throw std::out_of_range("cutoff beyond sieve limit");
}

} // namespace

double shift_of(PathMode mode, double scale, double t) {
    if (t < 0) throw std::invalid_argument("time grid values must be >= 0");
    switch (mode) {
        case PathMode::power:
            if (!(scale > 0 && scale < 1))
                throw std::invalid_argument("power mode base must lie in (0,1)");
            return std::exp(t * std::log(scale));
        case PathMode::exponential:
            if (!(scale > 0)) throw std::invalid_argument("exponential mode scale must be positive");
            return std::exp(-t * scale);
    }
    throw std::logic_error("unknown path mode");
}

double partial_series(const PrimeTable& table, const SeriesQuery& q) {
    if (!(q.s > 0)) throw std::invalid_argument("shift s must be positive");
    check_cutoff(table, q.cutoff_P);
    const double expo = -0.5 - q.s;
    Accumulator acc;
    for (std::uint64_t p : table.primes()) {
        if (p > q.cutoff_P) break;
        acc.add(eta_at(q.seed, q.model, p) * std::pow(static_cast<double>(p), expo));
    }
    return acc.value();
}

double truncated_variance(const PrimeTable& table, double s, std::uint64_t P, double sigma2) {
    if (s < 0) throw std::invalid_argument("shift s must be >= 0");
    check_cutoff(table, P);
    const double expo = -1.0 - 2.0 * s;
    Accumulator acc;
    for (std::uint64_t p : table.primes()) {
        if (p > P) break;
        acc.add(std::pow(static_cast<double>(p), expo));
    }
    return sigma2 * acc.value();
}

double exp_integral_e1(double x) {
    if (!(x > 0)) throw std::domain_error("E1 requires x > 0");
    if (x <= 1.0) {
        // Power series: E1(x) = -gamma - log x - sum_{n>=1} (-x)^n / (n n!).
        double sum = 0.0;
        double term = 1.0;
        for (int n = 1; n < 64; ++n) {
            term *= -x / n;
            const double contrib = term / n;
            sum -= contrib;
            if (std::abs(contrib) < 1e-18 * (std::abs(sum) + 1e-30)) break;
        }
        return -kEulerGamma - std::log(x) + sum;
    }
    // Continued fraction (modified Lentz): E1(x) = e^-x / (x+1- 1/(x+3- 4/(...))).
    const double tiny = 1e-300;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 200; ++i) {
        const double a = -static_cast<double>(i) * i;
        b += 2.0;
        d = a * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + a / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return h * std::exp(-x);
}

VarianceBreakdown g_hybrid(const PrimeTable& table, double s, std::uint64_t P, double sigma2) {
    if (!(s > 0 && s < std::exp(-1.0)))
        throw std::invalid_argument("g_hybrid requires 0 < s < 1/e");
    if (P < 100) throw std::invalid_argument("g_hybrid requires P >= 100");
    VarianceBreakdown out;
    out.partial = truncated_variance(table, s, P, sigma2);
    out.tail_estimate = sigma2 * exp_integral_e1(2.0 * s * std::log(static_cast<double>(P)));
    out.total = out.partial + out.tail_estimate;
    out.asymptote = sigma2 * std::log(1.0 / s);
    out.ratio = out.asymptote != 0 ? out.total / out.asymptote
                                   : std::numeric_limits<double>::quiet_NaN();
    return out;
}

double truncated_covariance(const PrimeTable& table, PathMode mode, double scale,
                            double t1, double t2, std::uint64_t P) {
    check_cutoff(table, P);
    const double expo = -1.0 - shift_of(mode, scale, t1) - shift_of(mode, scale, t2);
    Accumulator acc;
    for (std::uint64_t p : table.primes()) {
        if (p > P) break;
        acc.add(std::pow(static_cast<double>(p), expo));
    }
    return acc.value();
}

double covariance_tail_estimate(PathMode mode, double scale, double t1, double t2,
                                std::uint64_t P) {
    const double a = shift_of(mode, scale, t1) + shift_of(mode, scale, t2);
    return exp_integral_e1(a * std::log(static_cast<double>(P)));
}

std::vector<double> path_sample(const PrimeTable& table, const PathQuery& pq) {
    if (pq.grid.empty()) throw std::invalid_argument("time grid must be nonempty");
    for (std::size_t i = 1; i < pq.grid.size(); ++i)
        if (!(pq.grid[i - 1] <= pq.grid[i]))
            throw std::invalid_argument("time grid must be ascending");

    const double unit_shift = shift_of(pq.mode, pq.scale, 1.0);
    const double normalizer = truncated_variance(table, unit_shift, pq.cutoff_P, pq.model.sigma2);
    const double inv_root = 1.0 / std::sqrt(normalizer);

    std::vector<double> out;
    out.reserve(pq.grid.size());
    for (double t : pq.grid) {
        SeriesQuery q{shift_of(pq.mode, pq.scale, t), pq.cutoff_P, pq.seed, pq.model};
        out.push_back(partial_series(table, q) * inv_root);
    }
    return out;
}

double zeta_series(double r) {
    if (!(r > 1)) throw std::domain_error("zeta requires r > 1");
    constexpr std::uint64_t N = 1'000'000;
    Accumulator acc;
    std::uint64_t last = N;
    for (std::uint64_t n = 1; n <= N; ++n) {
        const double term = std::pow(static_cast<double>(n), -r);
        acc.add(term);
        if (term < 1e-18) {
            last = n;
            break;
        }
    }
    // Euler-Maclaurin tail from the last summed term: integral, half-term,
    // first Bernoulli term.
    const double nd = static_cast<double>(last);
    const double tail = std::pow(nd, 1.0 - r) / (r - 1.0) - 0.5 * std::pow(nd, -r) +
                        (r / 12.0) * std::pow(nd, -r - 1.0);
    return acc.value() + tail;
}

double lil_normalizer(double s, double sigma2) {
    if (sigma2 <= 0) throw std::invalid_argument("sigma2 must be positive");
    if (!(s > 0) || s >= kLilBoundary)
        throw std::domain_error("lil_normalizer requires s in (0, e^-e)");
    const double l1 = -std::log(s);
    const double l3 = std::log(std::log(l1));
    return 1.0 / std::sqrt(2.0 * sigma2 * l1 * l3);
}

std::vector<LilTerm> lil_sequence(double gamma, LilBranch branch, int n_max) {
    if (branch == LilBranch::minus && !(gamma > 0 && gamma < 1))
        throw std::invalid_argument("minus branch requires 0 < gamma < 1");
    if (branch == LilBranch::plus && !(gamma > 0))
        throw std::invalid_argument("plus branch requires gamma > 0");
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");

    const double expo = branch == LilBranch::minus ? 1.0 - gamma : 1.0 + gamma;
    std::vector<LilTerm> out;
    out.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        const double inner = std::exp(std::pow(static_cast<double>(n), expo));
        const double value = std::exp(-inner);
        out.push_back({value, value == 0.0});
    }
    return out;
}

double prime_walk(const PrimeTable& table, const SeedSpec& seed, const NoiseModel& model,
                  double x) {
    if (x > static_cast<double>(table.limit()))
        throw std::out_of_range("walk endpoint beyond sieve limit");
    Accumulator acc;
    for (std::uint64_t p : table.primes()) {
        if (static_cast<double>(p) > x) break;
        acc.add(eta_at(seed, model, p));
    }
    return acc.value();
}

} // namespace primeseries
