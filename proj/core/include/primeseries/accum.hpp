#pragma once

#include <cmath>

namespace primeseries {

// Two-term compensated accumulator (Neumaier variant of Kahan summation).
// Summing in a fixed order with this accumulator gives results that are
// reproducible across runs and accurate to ~1 ulp of the true sum even for
// 1e8 terms, which the series evaluators rely on.
class Accumulator {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace primeseries
