#pragma once

#include <cstddef>
#include <vector>

#include "besimc/hn_estimators.hpp"
#include "besimc/rng.hpp"

namespace besimc {

// Maximal invariant of the location-scale group: the ratios
// (y_i - y_n)/(y_{n-1} - y_n), i = 1..n-2, plus the sign of the anchor
// difference y_{n-1} - y_n.
struct UStatistic {
    std::vector<double> ratios;
    int sign = 1;
};

struct MreLocationConfig {
    double epsilon_cap = 0.1;
    std::size_t samples_per_n = 100;
    double box_upper = 10.0;
    double epsilon_fraction = 0.5;
};

// Monte Carlo cloud lying inside the U-window A_eps(y) within the box.
struct ConstrainedSample {
    std::vector<std::vector<double>> points;
    double epsilon_used = 0.0;
};

UStatistic u_statistic(const Sample& sample);

// Base equivariant statistics: mean, and mean absolute deviation
// about the mean.
double t0_star(const Sample& sample);
double t1_star(const Sample& sample);

ConstrainedSample constrained_sampler(const Sample& sample,
                                      const MreLocationConfig& config,
                                      const RandomStream& stream);
// Continuation form: consumes draws from an engine already in flight,
// so a caller can couple the cloud to other draws on the same stream.
ConstrainedSample constrained_sampler(const Sample& sample,
                                      const MreLocationConfig& config,
                                      Xoshiro256pp& engine);

// C(y): ratio of Gaussian-weighted cloud averages estimating
// rho(U) = E[T0* T1* | U] / E[T1*^2 | U] at unit scale, zero location.
double rho_estimate(const Sample& sample, const ConstrainedSample& cloud);

// D(y) = T0*(y) - C(y) T1*(y).
double mre_location(const Sample& sample, const MreLocationConfig& config,
                    const RandomStream& stream);
double mre_location(const Sample& sample, const MreLocationConfig& config,
                    Xoshiro256pp& engine);

} // namespace besimc
