#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "besimc/compensated.hpp"
#include "besimc/quadrature.hpp"
#include "besimc/rng.hpp"
#include "besimc/specfun.hpp"

namespace testsupport {

// High-precision reference values (frozen from an independent
// arbitrary-precision evaluation).
inline constexpr double kPhiAt1 = 0.8413447460685429486;
inline constexpr double kProbit075 = 0.6744897501960817432;
inline constexpr double kProbit055 = 0.1256613468550740342;
inline constexpr double kT5TailAt2 = 0.05096973941492917812;
inline constexpr double kRoot2OverPi = 0.7978845608028653559;

struct CnRef {
    int n;
    double value;
};
inline constexpr CnRef kCnRefs[] = {
    {1, 0.7978845608028653559},   {2, 0.4673899545102181379},
    {3, 0.3349029364006678035},   {5, 0.2156924957673220146},
    {10, 0.1151525543651751795},  {20, 0.05987044096511982772},
    {50, 0.02458884585762038769}, {100, 0.01241090806687541622}};

inline double normal_density(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

// Quadrature route to Phi, independent of the erfc-based production path.
// Integrates the upper tail over a wide interval; short spans trip the
// conservative floor in the backend's error estimate.
inline double normal_cdf_oracle(double x) {
    return 1.0 - besimc::integrate(normal_density, x, 40.0, 1e-12);
}

inline double t_density(int nu, double x) {
    const double v = static_cast<double>(nu);
    const double logc = besimc::log_gamma((v + 1.0) / 2.0) -
                        besimc::log_gamma(v / 2.0) - 0.5 * std::log(v * M_PI);
    return std::exp(logc - 0.5 * (v + 1.0) * std::log1p(x * x / v));
}

// Quadrature route to the upper t tail. The density decays like a power
// law, so the tail is summed over geometrically widening segments instead
// of one enormous interval.
inline double t_tail_oracle(int nu, double x) {
    if (x < 0.0) return 1.0 - t_tail_oracle(nu, -x);
    auto density = [nu](double t) { return t_density(nu, t); };
    besimc::CompensatedSum total;
    double lo = x;
    double width = 1.0;
    for (int k = 0; k < 64; ++k) {
        const double hi = lo + width;
        const double segment = besimc::integrate(density, lo, hi, 1e-14);
        total.add(segment);
        if (k > 4 && segment <= 1e-15 * total.value()) break;
        lo = hi;
        width *= 2.0;
    }
    return total.value();
}

// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        const double fa = static_cast<double>(i) / static_cast<double>(a.size());
        const double fb = static_cast<double>(j) / static_cast<double>(b.size());
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

// Asymptotic two-sample KS critical value at level 0.01.
inline double ks_threshold_001(std::size_t n1, std::size_t n2) {
    const double m = static_cast<double>(n1);
    const double n = static_cast<double>(n2);
    return 1.628 * std::sqrt((m + n) / (m * n));
}

inline double uniform_in(besimc::Xoshiro256pp& eng, double lo, double hi) {
    return besimc::uniform_range(eng, lo, hi);
}

} // namespace testsupport
