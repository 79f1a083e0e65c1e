#include "besimc/distributions.hpp"

#include <cmath>

#include "besimc/errors.hpp"
#include "besimc/specfun.hpp"

namespace besimc {

HalfNormalParams::HalfNormalParams(double xi_, double eta_) : xi(xi_), eta(eta_) {
    if (!(eta > 0.0)) throw DomainError("HalfNormalParams: eta must be positive");
    if (!std::isfinite(xi) || !std::isfinite(eta))
        throw DomainError("HalfNormalParams: parameters must be finite");
}

BivariateNormalParams::BivariateNormalParams(double rho_) : rho(rho_) {
    if (!(std::abs(rho) < 1.0))
        throw DomainError("BivariateNormalParams: |rho| must be below 1");
}

double std_normal_draw(Xoshiro256pp& eng) {
    return normal_quantile(uniform01(eng));
}

std::vector<double> sample_std_normal(const RandomStream& stream, std::size_t count) {
    if (count == 0) throw DomainError("sample_std_normal: count must be positive");
    std::vector<double> out(count);
    auto eng = stream.engine();
    for (auto& v : out) v = std_normal_draw(eng);
    return out;
}

double half_normal_draw(const HalfNormalParams& params, Xoshiro256pp& eng) {
    return params.xi + params.eta * std::abs(std_normal_draw(eng));
}

std::vector<double> sample_half_normal(const HalfNormalParams& params,
                                       const RandomStream& stream,
                                       std::size_t count) {
    if (count == 0) throw DomainError("sample_half_normal: count must be positive");
    std::vector<double> out(count);
    auto eng = stream.engine();
    for (auto& v : out) v = half_normal_draw(params, eng);
    return out;
}

double half_normal_pdf(const HalfNormalParams& params, double y) {
    if (y < params.xi) return 0.0;
    const double z = (y - params.xi) / params.eta;
    return std::sqrt(2.0 / M_PI) / params.eta * std::exp(-0.5 * z * z);
}

std::pair<double, double> half_normal_moments(const HalfNormalParams& params) {
    const double mean = params.xi + params.eta * std::sqrt(2.0 / M_PI);
    const double variance = (M_PI - 2.0) / M_PI * params.eta * params.eta;
    return {mean, variance};
}

std::pair<double, double> bivariate_normal_draw(const BivariateNormalParams& params,
                                                Xoshiro256pp& eng) {
    const double x = std_normal_draw(eng);
    const double z = std_normal_draw(eng);
    const double y = params.rho * x + std::sqrt(1.0 - params.rho * params.rho) * z;
    return {x, y};
}

std::vector<std::pair<double, double>> sample_bivariate_normal(
    const BivariateNormalParams& params, const RandomStream& stream,
    std::size_t count) {
    if (count == 0) throw DomainError("sample_bivariate_normal: count must be positive");
    std::vector<std::pair<double, double>> out(count);
    auto eng = stream.engine();
    for (auto& v : out) v = bivariate_normal_draw(params, eng);
    return out;
}

} // namespace besimc
