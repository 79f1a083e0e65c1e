#include "besimc/mre_location.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "besimc/compensated.hpp"
#include "besimc/errors.hpp"

namespace besimc {

namespace {

void validate(const MreLocationConfig& config) {
    if (!(config.epsilon_cap > 0.0))
        throw DomainError("MreLocationConfig: epsilon_cap must be positive");
    if (config.samples_per_n < 1)
        throw DomainError("MreLocationConfig: samples_per_n must be positive");
    if (!(config.box_upper > 0.0))
        throw DomainError("MreLocationConfig: box_upper must be positive");
    if (!(config.epsilon_fraction > 0.0) || !(config.epsilon_fraction < 1.0))
        throw DomainError("MreLocationConfig: epsilon_fraction must be in (0,1)");
}

// Verify one transformed point against the window. The sampler's
// arithmetic preserves U up to rounding, so the tolerance is the window
// radius plus a slack that scales with the cancellation in the anchor
// difference.
void verify_membership(const std::vector<double>& w, const UStatistic& target,
                       double eps, double box_upper) {
    const std::size_t n = w.size();
    for (double c : w)
        if (!(c >= 0.0) || !(c <= box_upper))
            throw MembershipViolationError("cloud point left the box");
    const double anchor = w[n - 2] - w[n - 1];
    const int sign = anchor > 0.0 ? 1 : (anchor < 0.0 ? -1 : 0);
    if (sign != target.sign)
        throw MembershipViolationError("cloud point flipped the anchor sign");
    double spread = 0.0;
    for (double c : w) spread = std::max(spread, std::abs(c));
    const double cancel = 1.0 + spread / std::abs(anchor);
    for (std::size_t i = 0; i + 2 < n; ++i) {
        const double ui = (w[i] - w[n - 1]) / anchor;
        const double slack = 1e-12 * (1.0 + std::abs(target.ratios[i])) * cancel;
        if (!(std::abs(ui - target.ratios[i]) <= eps + slack))
            throw MembershipViolationError("cloud point left the U window at ratio " +
                                           std::to_string(i + 1));
    }
}

} // namespace

UStatistic u_statistic(const Sample& sample) {
    if (sample.n() < 3) throw DomainError("u_statistic: need n >= 3");
    const std::vector<double>& y = sample.values();
    const std::size_t n = sample.n();
    const double anchor = y[n - 2] - y[n - 1];
    if (anchor == 0.0)
        throw DegenerateSampleError("u_statistic: tied anchor observations");
    UStatistic u;
    u.sign = anchor > 0.0 ? 1 : -1;
    u.ratios.resize(n - 2);
    for (std::size_t i = 0; i + 2 < n; ++i) u.ratios[i] = (y[i] - y[n - 1]) / anchor;
    return u;
}

double t0_star(const Sample& sample) { return sample.mean(); }

double t1_star(const Sample& sample) {
    CompensatedSum sum;
    for (double y : sample.values()) sum.add(std::abs(y - sample.mean()));
    return sum.value() / static_cast<double>(sample.n());
}

ConstrainedSample constrained_sampler(const Sample& sample,
                                      const MreLocationConfig& config,
                                      const RandomStream& stream) {
    auto eng = stream.engine();
    return constrained_sampler(sample, config, eng);
}

ConstrainedSample constrained_sampler(const Sample& sample,
                                      const MreLocationConfig& config,
                                      Xoshiro256pp& eng) {
    validate(config);
    const UStatistic u = u_statistic(sample);
    const std::size_t n = sample.n();

    double min_ratio = config.epsilon_cap;
    for (double a : u.ratios) min_ratio = std::min(min_ratio, std::abs(a));
    if (!(min_ratio > 0.0))
        throw DegenerateSampleError("constrained_sampler: zero invariant ratio");
    const double eps = config.epsilon_fraction * min_ratio;

    const std::size_t m = config.samples_per_n * n;

    ConstrainedSample out;
    out.epsilon_used = eps;
    out.points.reserve(m);
    std::vector<double> w(n);
    for (std::size_t j = 0; j < m; ++j) {
        // Anchor pair drawn until the required orientation comes up.
        double w_pen = 0.0;
        double w_lst = 0.0;
        int sign = 0;
        do {
            w_pen = uniform_range(eng, 0.0, config.box_upper);
            w_lst = uniform_range(eng, 0.0, config.box_upper);
            sign = w_pen > w_lst ? 1 : (w_pen < w_lst ? -1 : 0);
        } while (sign != u.sign);
        const double anchor = w_pen - w_lst;
        for (std::size_t i = 0; i + 2 < n; ++i) {
            const double t =
                uniform_range(eng, u.ratios[i] - eps, u.ratios[i] + eps);
            w[i] = w_lst + anchor * t;
        }
        w[n - 2] = w_pen;
        w[n - 1] = w_lst;

        // Location pass: slide the vector so its minimum lands in [0,1).
        const double low = *std::min_element(w.begin(), w.end());
        const double shift = uniform_range(eng, -low, 1.0 - low);
        for (double& c : w) c += shift;

        // Scale pass: renormalize by the maximum and spread across the box.
        const double high = *std::max_element(w.begin(), w.end());
        const double scale = uniform_range(eng, 0.0, config.box_upper) / high;
        for (double& c : w)
            c = std::clamp(c * scale, 0.0, config.box_upper);

        verify_membership(w, u, eps, config.box_upper);
        out.points.push_back(w);
    }
    return out;
}

double rho_estimate(const Sample& sample, const ConstrainedSample& cloud) {
    if (cloud.points.empty()) throw DomainError("rho_estimate: empty cloud");
    const std::size_t n = sample.n();
    const std::size_t m = cloud.points.size();

    std::vector<double> t0(m), t1(m), logw(m);
    for (std::size_t j = 0; j < m; ++j) {
        const std::vector<double>& w = cloud.points[j];
        if (w.size() != n)
            throw DomainError("rho_estimate: cloud dimension does not match sample");
        CompensatedSum sum;
        CompensatedSum normsq;
        for (double c : w) {
            sum.add(c);
            normsq.add(c * c);
        }
        const double mean = sum.value() / static_cast<double>(n);
        CompensatedSum absdev;
        for (double c : w) absdev.add(std::abs(c - mean));
        t0[j] = mean;
        t1[j] = absdev.value() / static_cast<double>(n);
        logw[j] = -0.5 * normsq.value();
    }

    // Common exponent shift: the Gaussian weights underflow around
    // ||w||^2 ~ 1.4e3, well inside the box at large n, while the ratio is
    // invariant to any common positive factor.
    const double top = *std::max_element(logw.begin(), logw.end());
    CompensatedSum numerator;
    CompensatedSum denominator;
    for (std::size_t j = 0; j < m; ++j) {
        const double weight = std::exp(logw[j] - top);
        numerator.add(t0[j] * t1[j] * weight);
        denominator.add(t1[j] * t1[j] * weight);
    }
    if (!(denominator.value() > 0.0))
        throw DegenerateCloudError("rho_estimate: all cloud weights vanished");
    return numerator.value() / denominator.value();
}

double mre_location(const Sample& sample, const MreLocationConfig& config,
                    const RandomStream& stream) {
    auto eng = stream.engine();
    return mre_location(sample, config, eng);
}

double mre_location(const Sample& sample, const MreLocationConfig& config,
                    Xoshiro256pp& eng) {
    const ConstrainedSample cloud = constrained_sampler(sample, config, eng);
    const double c = rho_estimate(sample, cloud);
    return t0_star(sample) - c * t1_star(sample);
}

} // namespace besimc
