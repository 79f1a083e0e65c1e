#pragma once

#include <cmath>
#include <cstddef>

namespace besimc {

// Neumaier compensated accumulator. Summation order still matters for
// bit-identical results; callers that need order independence must feed
// values in a canonical (index) order.
class CompensatedSum {
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
    void reset() { sum_ = comp_ = 0.0; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

template <typename It>
double compensated_total(It first, It last) {
    CompensatedSum acc;
    for (; first != last; ++first) acc.add(*first);
    return acc.value();
}

} // namespace besimc
