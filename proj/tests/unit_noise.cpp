#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "primeseries/noise.hpp"
#include "primeseries/primes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

using namespace primeseries;

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

const PrimeTable& million_primes() {
    // 15485863 is the 10^6-th prime.
    static const PrimeTable table = PrimeTable::sieve(15'485'863);
    return table;
}

} // namespace

TEST_CASE("eta_at is a pure function of seed, model and prime") {
    const NoiseModel model = NoiseModel::gaussian(1.0);
    const SeedSpec seed{123, 7};
    for (std::uint64_t p : {2ull, 3ull, 104729ull}) {
        const double first = eta_at(seed, model, p);
        CHECK(eta_at(seed, model, p) == first);
    }
}

TEST_CASE("streams under one master seed are separated") {
    const NoiseModel model = NoiseModel::gaussian(1.0);
    int differing = 0;
    for (std::uint64_t stream = 1; stream <= 32; ++stream)
        if (eta_at({5, stream}, model, 2) != eta_at({5, 0}, model, 2)) ++differing;
    CHECK(differing >= 31);
}

TEST_CASE("frozen rademacher signs at small primes") {
    CHECK(sign_at({0, 0}, 2) == 1);
    CHECK(sign_at({1, 0}, 2) == -1);
    CHECK(sign_at({1, 0}, 3) == 1);
    CHECK(sign_at({2, 0}, 2) == 1);
    CHECK(sign_at({2, 0}, 3) == -1);
    CHECK(sign_at({7, 0}, 3) == -1);
}

TEST_CASE("mix_bits has no collisions over a million consecutive keys") {
    std::vector<std::uint64_t> keys;
    keys.reserve(1'000'000);
    for (std::uint64_t n = 1; n <= 1'000'000; ++n) keys.push_back(detail::mix_bits({1, 0}, n));
    std::sort(keys.begin(), keys.end());
    CHECK(std::adjacent_find(keys.begin(), keys.end()) == keys.end());
}

TEST_CASE("uniform01 is positive and reaches one only at the top bit pattern") {
    CHECK(detail::uniform01(0) > 0.0);
    CHECK(detail::uniform01(0) == 0x1p-54);
    CHECK(detail::uniform01(1ull << 11) == 0x1p-53 + 0x1p-54);
    // In the top binade every output sits on a half-ulp midpoint, so round
    // half to even lands the all-ones pattern exactly on 1.0 and the next
    // pattern down on 1 - 2^-52.
    CHECK(detail::uniform01(~0ull) == 1.0);
    CHECK(detail::uniform01(~0ull - (1ull << 11)) == 1.0 - 0x1p-52);
    CHECK(detail::uniform01(~0ull - (1ull << 11)) < 1.0);
}

TEST_CASE("normal quantile inverts the normal CDF") {
    for (double u : {1e-12, 1e-6, 0.025, 0.31, 0.5, 0.8413, 1.0 - 1e-6, 1.0 - 1e-12}) {
        CHECK(std::abs(normal_cdf(detail::normal_quantile(u)) - u) <= 1e-9);
    }
    CHECK(std::abs(detail::normal_quantile(0.5)) < 1e-12);
    CHECK(std::abs(detail::normal_quantile(0.31) + detail::normal_quantile(0.69)) < 1e-9);
    CHECK_THROWS_AS(detail::normal_quantile(0.0), std::domain_error);
    CHECK_THROWS_AS(detail::normal_quantile(1.0), std::domain_error);
}

TEST_CASE("model factories validate their parameters") {
    CHECK_THROWS_AS(NoiseModel::rademacher(0.0), std::invalid_argument);
    CHECK_THROWS_AS(NoiseModel::gaussian(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(NoiseModel::centered_uniform(0.0), std::invalid_argument);

    const NoiseModel tp = NoiseModel::two_point(3.0, -1.0, 0.25);
    CHECK(tp.sigma2 == doctest::Approx(3.0).epsilon(1e-14));
    CHECK_THROWS_AS(NoiseModel::two_point(1.0, -1.0, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(NoiseModel::two_point(3.0, -1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(NoiseModel::two_point(3.0, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(NoiseModel::two_point(0.0, 0.0, 0.5), std::invalid_argument);
}

TEST_CASE("rademacher support is exactly plus or minus the scale") {
    const NoiseModel model = NoiseModel::rademacher(4.0);
    for (std::uint64_t p : PrimeTable::sieve(97).primes()) {
        const double v = eta_at({3, 0}, model, p);
        CHECK((v == 2.0 || v == -2.0));
    }
}

TEST_CASE("two_point support and frequency") {
    const NoiseModel model = NoiseModel::two_point(3.0, -1.0, 0.25);
    const auto& primes = million_primes().primes();
    std::size_t hits_a = 0;
    for (std::size_t i = 0; i < 100'000; ++i) {
        const double v = eta_at({42, 0}, model, primes[i]);
        REQUIRE((v == 3.0 || v == -1.0));
        if (v == 3.0) ++hits_a;
    }
    const double freq = static_cast<double>(hits_a) / 100'000.0;
    CHECK(freq > 0.24);
    CHECK(freq < 0.26);
}

TEST_CASE("centered uniform is bounded by sqrt(3 sigma2)") {
    const NoiseModel model = NoiseModel::centered_uniform(2.0);
    const double bound = std::sqrt(6.0);
    for (std::uint64_t p : PrimeTable::sieve(1000).primes()) {
        CHECK(std::abs(eta_at({8, 2}, model, p)) < bound);
    }
}

TEST_CASE("gaussian scale enters only through the square root factor") {
    const NoiseModel one = NoiseModel::gaussian(1.0);
    const NoiseModel four = NoiseModel::gaussian(4.0);
    for (std::uint64_t p : PrimeTable::sieve(541).primes()) {
        CHECK(eta_at({11, 5}, four, p) == 2.0 * eta_at({11, 5}, one, p));
    }
}

TEST_CASE("sign_at agrees with the unit rademacher realization") {
    const NoiseModel model = NoiseModel::rademacher(1.0);
    const auto& primes = million_primes().primes();
    for (std::size_t i = 0; i < 10'000; ++i) {
        const double v = eta_at({9, 3}, model, primes[i]);
        CHECK(sign_at({9, 3}, primes[i]) == (v > 0.0 ? 1 : -1));
    }
}

TEST_CASE("sign frequency over 1e5 primes is balanced") {
    const auto& primes = million_primes().primes();
    std::size_t plus = 0;
    for (std::size_t i = 0; i < 100'000; ++i)
        if (sign_at({42, 0}, primes[i]) == 1) ++plus;
    const double freq = static_cast<double>(plus) / 100'000.0;
    CHECK(freq >= 0.494);
    CHECK(freq <= 0.506);
}

TEST_CASE("gaussian mean over 1e5 primes is near zero") {
    const NoiseModel model = NoiseModel::gaussian(1.0);
    const auto& primes = million_primes().primes();
    double sum = 0.0;
    for (std::size_t i = 0; i < 100'000; ++i) sum += eta_at({42, 0}, model, primes[i]);
    CHECK(std::abs(sum / 100'000.0) <= 0.0127);
}

TEST_CASE("second moments over 1e6 primes match sigma2 within 2 percent") {
    const auto& primes = million_primes().primes();
    const struct {
        NoiseModel model;
        double sigma2;
    } cases[] = {
        {NoiseModel::rademacher(1.0), 1.0},
        {NoiseModel::gaussian(1.0), 1.0},
        {NoiseModel::centered_uniform(1.0), 1.0},
        {NoiseModel::two_point(3.0, -1.0, 0.25), 3.0},
    };
    for (const auto& c : cases) {
        double sum = 0.0;
        for (std::uint64_t p : primes) {
            const double v = eta_at({42, 0}, c.model, p);
            sum += v * v;
        }
        const double m2 = sum / static_cast<double>(primes.size());
        CHECK(std::abs(m2 / c.sigma2 - 1.0) <= 0.02);
    }
}
