#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "primeseries/dirichlet.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

using namespace primeseries;

namespace {

const PrimeTable& table_1e4() {
    static const PrimeTable t = PrimeTable::sieve(10'000);
    return t;
}

const PrimeTable& table_1e6() {
    static const PrimeTable t = PrimeTable::sieve(1'000'000);
    return t;
}

const PrimeTable& table_1e7() {
    static const PrimeTable t = PrimeTable::sieve(10'000'000);
    return t;
}

double rel_gap(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Composite Simpson for E1(x) = integral over u >= 0 of exp(-x-u)/(x+u).
double e1_quadrature(double x) {
    const double upper = 40.0;
    const int panels = 20000;
    const double h = upper / panels;
    auto f = [x](double u) { return std::exp(-x - u) / (x + u); };
    double sum = f(0.0) + f(upper);
    for (int i = 1; i < panels; ++i) sum += f(i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

} // namespace

TEST_CASE("partial series, two primes by hand") {
    // Master seed 2 realizes eta_2 = +1, eta_3 = -1.
    SeriesQuery q;
    q.s = 0.5;
    q.cutoff_P = 3;
    q.seed = {2, 0};
    q.model = NoiseModel::rademacher(1.0);
    CHECK(partial_series(table_1e4(), q) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));

    q.cutoff_P = 2;
    CHECK(partial_series(table_1e4(), q) == 0.5);
}

TEST_CASE("partial series, frozen value at P=100") {
    SeriesQuery q;
    q.s = 0.5;
    q.cutoff_P = 100;
    q.seed = {1, 0};
    q.model = NoiseModel::rademacher(1.0);
    CHECK(rel_gap(partial_series(table_1e4(), q), -0.4556283308775971) < 1e-13);
}

TEST_CASE("partial series agrees with a reversed naive sum") {
    SeriesQuery q;
    q.s = 0.1;
    q.cutoff_P = 10'000;
    q.seed = {4, 2};
    q.model = NoiseModel::gaussian(1.0);
    const double value = partial_series(table_1e4(), q);

    const auto& primes = table_1e4().primes();
    double naive = 0.0;
    for (auto it = primes.rbegin(); it != primes.rend(); ++it) {
        const double p = static_cast<double>(*it);
        naive += eta_at(q.seed, q.model, *it) * std::pow(p, -0.5 - q.s);
    }
    CHECK(std::abs(value - naive) < 1e-12);
}

TEST_CASE("partial series scales linearly in the noise amplitude") {
    SeriesQuery q;
    q.s = 0.25;
    q.cutoff_P = 10'000;
    q.seed = {6, 1};

    q.model = NoiseModel::rademacher(1.0);
    const double base = partial_series(table_1e4(), q);
    q.model = NoiseModel::rademacher(9.0);
    CHECK(rel_gap(partial_series(table_1e4(), q), 3.0 * base) < 1e-14);

    q.model = NoiseModel::two_point(3.0, -1.0, 0.25);
    const double tp = partial_series(table_1e4(), q);
    q.model = NoiseModel::two_point(6.0, -2.0, 0.25);
    CHECK(partial_series(table_1e4(), q) == 2.0 * tp);

    q.model = NoiseModel::gaussian(1.0);
    const double ga = partial_series(table_1e4(), q);
    q.model = NoiseModel::gaussian(4.0);
    CHECK(partial_series(table_1e4(), q) == 2.0 * ga);
}

TEST_CASE("partial series validation") {
    SeriesQuery q;
    q.s = 0.0;
    q.cutoff_P = 100;
    CHECK_THROWS_AS(partial_series(table_1e4(), q), std::invalid_argument);
    q.s = 0.5;
    q.cutoff_P = 1;
    CHECK_THROWS_AS(partial_series(table_1e4(), q), std::invalid_argument);
    q.cutoff_P = 20'000;
    CHECK_THROWS_AS(partial_series(table_1e4(), q), std::out_of_range);
}

TEST_CASE("truncated variance, small cutoffs by hand") {
    CHECK(truncated_variance(table_1e4(), 0.5, 3, 1.0) ==
          doctest::Approx(13.0 / 36.0).epsilon(1e-15));
    CHECK(truncated_variance(table_1e4(), 0.0, 10, 1.0) ==
          doctest::Approx(247.0 / 210.0).epsilon(1e-14));
    const double v = truncated_variance(table_1e4(), 0.5, 3, 1.0);
    CHECK(truncated_variance(table_1e4(), 0.5, 3, 2.0) == 2.0 * v);
}

TEST_CASE("truncated variance, frozen value and naive oracle") {
    CHECK(rel_gap(truncated_variance(table_1e6(), 0.01, 1'000'000, 1.0),
                  2.6551336449819707) < 1e-13);

    double naive = 0.0;
    const auto& primes = table_1e4().primes();
    for (auto it = primes.rbegin(); it != primes.rend(); ++it)
        naive += std::pow(static_cast<double>(*it), -1.0 - 0.6);
    CHECK(rel_gap(truncated_variance(table_1e4(), 0.3, 10'000, 1.0), naive) < 1e-13);
}

TEST_CASE("truncated variance validation") {
    CHECK_THROWS_AS(truncated_variance(table_1e4(), -0.1, 100, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(truncated_variance(table_1e4(), 0.5, 1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(truncated_variance(table_1e4(), 0.5, 20'000, 1.0), std::out_of_range);
}

TEST_CASE("exponential integral, frozen values") {
    const struct {
        double x, value;
    } frozen[] = {
        {1e-6, 13.23829589306249},
        {0.1, 1.8229239584193906},
        {0.3, 0.9056766516758468},
        {0.999, 0.21975218202294455},
        {1.0, 0.21938393439552029},
        {1.001, 0.2190164225274689},
        {2.5, 0.024914917870269736},
        {7.0, 0.00011548173161033822},
        {50.0, 3.783264029550459e-24},
    };
    double prev = 1e30;
    for (const auto& f : frozen) {
        const double v = exp_integral_e1(f.x);
        CHECK(rel_gap(v, f.value) < 1e-9);
        CHECK(v < prev);
        prev = v;
    }
    CHECK_THROWS_AS(exp_integral_e1(0.0), std::domain_error);
    CHECK_THROWS_AS(exp_integral_e1(-1.0), std::domain_error);
}

TEST_CASE("exponential integral matches direct quadrature") {
    for (double x : {0.3, 1.0, 2.5, 7.0}) {
        CHECK(rel_gap(exp_integral_e1(x), e1_quadrature(x)) < 1e-9);
    }
}

TEST_CASE("zeta, frozen values") {
    CHECK(rel_gap(zeta_series(1.00001), 100000.57721639305) < 1e-8);
    CHECK(rel_gap(zeta_series(1.001), 1000.5772884759015) < 1e-9);
    CHECK(rel_gap(zeta_series(1.5), 2.612375348685488) < 1e-9);
    CHECK(rel_gap(zeta_series(2.0), 1.6449340668482264) < 1e-9);
    CHECK(rel_gap(zeta_series(3.0), 1.2020569031595942) < 1e-9);
    CHECK(rel_gap(zeta_series(4.0), 1.0823232337111381) < 1e-9);
    CHECK(rel_gap(zeta_series(10.0), 1.000994575127818) < 1e-9);
}

TEST_CASE("zeta is enclosed by partial sums with integral tails") {
    for (double r : {1.5, 2.0, 4.0}) {
        double partial = 0.0;
        const int N = 1000;
        for (int n = N; n >= 1; --n) partial += std::pow(n, -r);
        const double upper = partial + std::pow(N, 1.0 - r) / (r - 1.0);
        const double v = zeta_series(r);
        CHECK(v > partial);
        CHECK(v < upper);
    }
    CHECK(zeta_series(1.5) > zeta_series(2.0));
    CHECK(zeta_series(4.0) > zeta_series(10.0));
    CHECK(zeta_series(10.0) > 1.0);
    CHECK_THROWS_AS(zeta_series(1.0), std::domain_error);
    CHECK_THROWS_AS(zeta_series(0.5), std::domain_error);
}

TEST_CASE("hybrid variance estimate ties its fields together") {
    const auto b = g_hybrid(table_1e6(), 0.01, 1'000'000, 1.0);
    CHECK(b.partial == truncated_variance(table_1e6(), 0.01, 1'000'000, 1.0));
    CHECK(b.tail_estimate ==
          doctest::Approx(exp_integral_e1(2 * 0.01 * std::log(1e6))).epsilon(1e-15));
    CHECK(b.total == doctest::Approx(b.partial + b.tail_estimate).epsilon(1e-15));
    CHECK(b.asymptote == doctest::Approx(std::log(1.0 / 0.01)).epsilon(1e-15));
    CHECK(b.ratio == doctest::Approx(b.total / b.asymptote).epsilon(1e-15));
    CHECK(b.tail_estimate > 0.0);

    const auto twice = g_hybrid(table_1e6(), 0.01, 1'000'000, 2.0);
    CHECK(rel_gap(twice.total, 2.0 * b.total) < 1e-14);
}

TEST_CASE("hybrid variance estimate validation") {
    CHECK_THROWS_AS(g_hybrid(table_1e4(), 0.5, 10'000, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(g_hybrid(table_1e4(), 0.0, 10'000, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(g_hybrid(table_1e4(), 0.01, 50, 1.0), std::invalid_argument);
}

TEST_CASE("shift map, both modes through one exponential") {
    CHECK(shift_of(PathMode::power, 0.037, 0.0) == 1.0);
    CHECK(shift_of(PathMode::exponential, 10.0, 1.0) == std::exp(-10.0));
    for (double t : {0.0, 0.3, 1.0, 2.7}) {
        const double s = 0.037;
        CHECK(shift_of(PathMode::power, s, t) ==
              shift_of(PathMode::exponential, -std::log(s), t));
    }
    CHECK_THROWS_AS(shift_of(PathMode::power, 0.5, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(shift_of(PathMode::power, 1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(shift_of(PathMode::power, 0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(shift_of(PathMode::exponential, 0.0, 0.5), std::invalid_argument);
}

TEST_CASE("path sample normalizes by the unit-time deviation") {
    PathQuery pq;
    pq.mode = PathMode::exponential;
    pq.scale = 5.0;
    pq.grid = {0.25, 1.0, 2.0};
    pq.cutoff_P = 10'000;
    pq.seed = {3, 4};
    pq.model = NoiseModel::rademacher(1.0);

    const auto values = path_sample(table_1e4(), pq);
    REQUIRE(values.size() == 3);
    CHECK(values == path_sample(table_1e4(), pq));

    const double denom =
        std::sqrt(truncated_variance(table_1e4(), shift_of(pq.mode, pq.scale, 1.0), 10'000, 1.0));
    for (std::size_t i = 0; i < values.size(); ++i) {
        SeriesQuery q;
        q.s = shift_of(pq.mode, pq.scale, pq.grid[i]);
        q.cutoff_P = pq.cutoff_P;
        q.seed = pq.seed;
        q.model = pq.model;
        CHECK(rel_gap(values[i], partial_series(table_1e4(), q) / denom) < 1e-14);
    }
}

TEST_CASE("path sample at time zero in power mode stays bounded") {
    PathQuery pq;
    pq.mode = PathMode::power;
    pq.scale = 0.1;
    pq.grid = {0.0, 1.0};
    pq.cutoff_P = 10'000;
    pq.seed = {12, 0};
    pq.model = NoiseModel::rademacher(1.0);

    const auto values = path_sample(table_1e4(), pq);
    const double denom = std::sqrt(truncated_variance(table_1e4(), 0.1, 10'000, 1.0));
    // At shift 1 the series is dominated by sum p^(-3/2) < 0.85.
    CHECK(std::abs(values[0]) * denom < 0.85);
}

TEST_CASE("path sample validation") {
    PathQuery pq;
    pq.cutoff_P = 100;
    pq.grid = {};
    CHECK_THROWS_AS(path_sample(table_1e4(), pq), std::invalid_argument);
    pq.grid = {1.0, 0.5};
    CHECK_THROWS_AS(path_sample(table_1e4(), pq), std::invalid_argument);
    pq.grid = {-0.5, 1.0};
    CHECK_THROWS_AS(path_sample(table_1e4(), pq), std::invalid_argument);
}

TEST_CASE("truncated covariance, structure") {
    const auto& t = table_1e4();
    const double d = truncated_covariance(t, PathMode::exponential, 10.0, 0.5, 0.5, 10'000);
    const double a = shift_of(PathMode::exponential, 10.0, 0.5);
    CHECK(rel_gap(d, truncated_variance(t, a, 10'000, 1.0)) < 1e-15);

    CHECK(truncated_covariance(t, PathMode::exponential, 10.0, 0.25, 1.0, 10'000) ==
          truncated_covariance(t, PathMode::exponential, 10.0, 1.0, 0.25, 10'000));

    double naive = 0.0;
    const double a1 = shift_of(PathMode::exponential, 10.0, 0.25);
    const double a2 = shift_of(PathMode::exponential, 10.0, 1.0);
    for (std::uint64_t p : PrimeTable::sieve(1000).primes())
        naive += std::pow(static_cast<double>(p), -1.0 - a1 - a2);
    CHECK(rel_gap(truncated_covariance(t, PathMode::exponential, 10.0, 0.25, 1.0, 1000), naive) <
          1e-13);
}

TEST_CASE("truncated covariance, frozen grid at P=1e7") {
    const auto& t = table_1e7();
    const struct {
        double t1, t2, value;
    } frozen[] = {
        {0.25, 0.25, 1.6610216417532115},
        {0.25, 0.5, 2.1039487051254104},
        {0.25, 1.0, 2.1548374806798507},
        {0.5, 0.5, 2.853218941022515},
        {0.5, 1.0, 2.944012037334858},
        {1.0, 1.0, 3.0401073665425047},
    };
    for (const auto& f : frozen) {
        const double v =
            truncated_covariance(t, PathMode::exponential, 10.0, f.t1, f.t2, 10'000'000);
        CHECK(rel_gap(v, f.value) < 1e-12);
    }
}

TEST_CASE("covariance tail estimate completes the truncated sum") {
    const double a1 = shift_of(PathMode::exponential, 10.0, 0.5);
    const double a2 = shift_of(PathMode::exponential, 10.0, 1.0);
    CHECK(covariance_tail_estimate(PathMode::exponential, 10.0, 0.5, 1.0, 10'000'000) ==
          doctest::Approx(exp_integral_e1((a1 + a2) * std::log(1e7))).epsilon(1e-15));
}

TEST_CASE("lil normalizer, frozen values and domain") {
    CHECK(rel_gap(lil_normalizer(0.01, 1.0), 0.5063783342219458) < 1e-12);
    CHECK(rel_gap(lil_normalizer(0.001, 1.0), 0.3314440844741372) < 1e-12);

    const double s_star = std::exp(-std::exp(std::exp(1.0)));
    CHECK(rel_gap(lil_normalizer(s_star, 1.0), 0.18164255537361357) < 1e-12);

    CHECK(lil_normalizer(0.01, 4.0) == 0.5 * lil_normalizer(0.01, 1.0));

    const double boundary = std::exp(-std::exp(1.0));
    CHECK_THROWS_AS(lil_normalizer(boundary, 1.0), std::domain_error);
    CHECK_THROWS_AS(lil_normalizer(0.07, 1.0), std::domain_error);
    CHECK_THROWS_AS(lil_normalizer(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(lil_normalizer(-0.5, 1.0), std::domain_error);
    CHECK_THROWS_AS(lil_normalizer(0.01, 0.0), std::invalid_argument);
}

TEST_CASE("lil normalizer satisfies its defining identity") {
    for (double s : {1e-3, 1e-5, 1e-7}) {
        for (double sigma2 : {1.0, 2.5}) {
            const double l1 = std::log(1.0 / s);
            const double l3 = std::log(std::log(l1));
            const double v = lil_normalizer(s, sigma2);
            CHECK(std::abs(v * std::sqrt(2.0 * sigma2 * l1 * l3) - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("lil sequence, both branches") {
    const auto minus = lil_sequence(0.5, LilBranch::minus, 45);
    CHECK(minus[0].value == doctest::Approx(0.06598803584531254).epsilon(1e-14));
    CHECK(minus[1].value == doctest::Approx(0.016354529624025168).epsilon(1e-13));
    for (std::size_t i = 1; i < minus.size(); ++i) {
        if (!minus[i].underflowed) CHECK(minus[i].value < minus[i - 1].value);
    }
    CHECK_FALSE(minus[42].underflowed); // n=43, about 1e-306
    CHECK(minus[43].underflowed);       // n=44 underflows to zero
    CHECK(minus[43].value == 0.0);

    const auto plus = lil_sequence(0.5, LilBranch::plus, 5);
    CHECK(plus[0].value == doctest::Approx(0.06598803584531254).epsilon(1e-14));
    CHECK_FALSE(plus[2].underflowed);
    CHECK(plus[3].underflowed);
    CHECK(plus[4].underflowed);
}

TEST_CASE("lil sequence validation") {
    CHECK_THROWS_AS(lil_sequence(0.0, LilBranch::minus, 5), std::invalid_argument);
    CHECK_THROWS_AS(lil_sequence(1.0, LilBranch::minus, 5), std::invalid_argument);
    CHECK_THROWS_AS(lil_sequence(0.0, LilBranch::plus, 5), std::invalid_argument);
    CHECK_THROWS_AS(lil_sequence(0.5, LilBranch::minus, 0), std::invalid_argument);
    CHECK(lil_sequence(1.5, LilBranch::plus, 3).size() == 3);
}

TEST_CASE("prime walk") {
    const NoiseModel model = NoiseModel::rademacher(1.0);
    CHECK(prime_walk(table_1e4(), {2, 0}, model, 1.5) == 0.0);
    CHECK(prime_walk(table_1e4(), {2, 0}, model, 2.5) == 1.0);
    CHECK(prime_walk(table_1e4(), {2, 0}, model, 3.0) == 0.0); // +1 at 2, -1 at 3

    const double walk = prime_walk(table_1e6(), {5, 0}, model, 1e6);
    CHECK(walk == 382.0);
    CHECK(std::abs(walk) <= 5.0 * std::sqrt(78498.0));

    CHECK_THROWS_AS(prime_walk(table_1e4(), {2, 0}, model, 2e4), std::out_of_range);
}
