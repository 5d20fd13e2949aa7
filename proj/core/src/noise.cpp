#include "primeseries/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace primeseries {

NoiseModel NoiseModel::rademacher(double sigma2) {
    if (sigma2 <= 0) throw std::invalid_argument("sigma2 must be positive");
    return {NoiseKind::rademacher, sigma2, 0, 0, 0};
}

NoiseModel NoiseModel::gaussian(double sigma2) {
    if (sigma2 <= 0) throw std::invalid_argument("sigma2 must be positive");
    return {NoiseKind::gaussian, sigma2, 0, 0, 0};
}

NoiseModel NoiseModel::centered_uniform(double sigma2) {
    if (sigma2 <= 0) throw std::invalid_argument("sigma2 must be positive");
    return {NoiseKind::centered_uniform, sigma2, 0, 0, 0};
}

NoiseModel NoiseModel::two_point(double a, double b, double q) {
    if (!(q > 0 && q < 1)) throw std::invalid_argument("two_point q must lie in (0,1)");
    const double mean = q * a + (1 - q) * b;
    const double sigma2 = q * a * a + (1 - q) * b * b;
    if (sigma2 <= 0) throw std::invalid_argument("two_point support must be nondegenerate");
    const double scale = std::max(std::abs(a), std::abs(b));
    if (std::abs(mean) > 1e-12 * scale)
        throw std::invalid_argument("two_point parameters must satisfy q*a + (1-q)*b = 0");
    return {NoiseKind::two_point, sigma2, a, b, q};
}

namespace detail {

namespace {

// splitmix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

} // namespace

std::uint64_t mix_bits(const SeedSpec& seed, std::uint64_t p) {
    std::uint64_t x = p;
    x = mix64(x ^ (seed.master_seed + 0x9E3779B97F4A7C15ull));
    x = mix64(x ^ (seed.stream_label + 0xD1B54A32D192ED03ull));
    return x;
}

double uniform01(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

// Wichura's algorithm AS 241, routine PPND16.
double normal_quantile(double u) {
    if (!(u > 0.0 && u < 1.0)) throw std::domain_error("quantile argument must lie in (0,1)");
    const double q = u - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num =
            (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                  6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
              1.3314166789178437745e2) * r + 3.3871328727963666080e0);
        const double den =
            (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                  3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
              4.2313330701600911252e1) * r + 1.0);
        return q * num / den;
    }
    double r = q < 0 ? u : 1.0 - u;
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0);
        const double den =
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
        value = num / den;
    } else {
        r -= 5.0;
        const double num =
            (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0);
        const double den =
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
        value = num / den;
    }
    return q < 0 ? -value : value;
}

} // namespace detail

double eta_at(const SeedSpec& seed, const NoiseModel& model, std::uint64_t p) {
    const std::uint64_t bits = detail::mix_bits(seed, p);
    switch (model.kind) {
        case NoiseKind::rademacher: {
            const double sigma = std::sqrt(model.sigma2);
            return (bits >> 63) ? sigma : -sigma;
        }
        case NoiseKind::gaussian:
            return std::sqrt(model.sigma2) * detail::normal_quantile(detail::uniform01(bits));
        case NoiseKind::centered_uniform: {
            const double half_width = std::sqrt(3.0 * model.sigma2);
            return (2.0 * detail::uniform01(bits) - 1.0) * half_width;
        }
        case NoiseKind::two_point:
            return detail::uniform01(bits) < model.q ? model.a : model.b;
    }
    throw std::logic_error("unknown noise kind");
}

int sign_at(const SeedSpec& seed, std::uint64_t p) {
    static const NoiseModel unit = NoiseModel::rademacher(1.0);
    return eta_at(seed, unit, p) > 0 ? 1 : -1;
}

} // namespace primeseries
