#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "besimc/rng.hpp"

namespace besimc {

// General half-normal HN(xi, eta): law of xi + eta*|Z|, Z ~ N(0,1).
struct HalfNormalParams {
    double xi = 0.0;
    double eta = 1.0;

    HalfNormalParams(double xi_, double eta_);
};

// Zero-mean bivariate normal with unit variances and correlation rho.
struct BivariateNormalParams {
    double rho = 0.0;

    explicit BivariateNormalParams(double rho_);
};

// Single standard normal variate by inverse CDF; consumes one uniform.
double std_normal_draw(Xoshiro256pp& eng);

std::vector<double> sample_std_normal(const RandomStream& stream, std::size_t count);

// Y = xi + eta*|Z| drawn from the given engine; one uniform per draw.
double half_normal_draw(const HalfNormalParams& params, Xoshiro256pp& eng);

std::vector<double> sample_half_normal(const HalfNormalParams& params,
                                       const RandomStream& stream,
                                       std::size_t count);

double half_normal_pdf(const HalfNormalParams& params, double y);

// (mean, variance) = (xi + eta*sqrt(2/pi), eta^2*(pi-2)/pi).
std::pair<double, double> half_normal_moments(const HalfNormalParams& params);

// Pair (x, y) with standard normal margins and correlation rho,
// built as y = rho*x + sqrt(1-rho^2)*z; consumes two uniforms.
std::pair<double, double> bivariate_normal_draw(const BivariateNormalParams& params,
                                                Xoshiro256pp& eng);

std::vector<std::pair<double, double>> sample_bivariate_normal(
    const BivariateNormalParams& params, const RandomStream& stream,
    std::size_t count);

} // namespace besimc
