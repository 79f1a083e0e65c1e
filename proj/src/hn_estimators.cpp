#include "besimc/hn_estimators.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "besimc/compensated.hpp"
#include "besimc/distributions.hpp"
#include "besimc/errors.hpp"
#include "besimc/quadrature.hpp"
#include "besimc/specfun.hpp"

namespace besimc {

namespace {

constexpr double kRoot2OverPi = 0.79788456080286535588;
constexpr double kRootPiOver2 = 1.25331413731550025121;

double gamma_ratio(double a, double b) {
    return std::exp(log_gamma(a) - log_gamma(b));
}

// phi(z) / Phi(z) for z <= 0, stable deep in the left tail where both
// the density and the CDF underflow. Past the switch point the standard
// Mills-ratio expansion is accurate to ~1e-10 relative and improving.
double normal_hazard_lower(double z) {
    if (z > -30.0)
        return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI) / normal_cdf(z);
    const double t = -z;
    const double t2 = t * t;
    return t / (1.0 - 1.0 / t2 + 3.0 / (t2 * t2) - 15.0 / (t2 * t2 * t2));
}

void require_matching(const Sample& sample, const CnValue& cn, const char* who) {
    if (static_cast<int>(sample.n()) != cn.n)
        throw DomainError(std::string(who) + ": sample size does not match c_n");
}

void require_support(const Sample& sample, double xi0, const char* who) {
    if (sample.min() < xi0)
        throw SupportViolationError(std::string(who) +
                                    ": observation below the known location");
}

double sum_sq_about(const Sample& sample, double center) {
    CompensatedSum ss;
    for (double y : sample.values()) ss.add((y - center) * (y - center));
    return ss.value();
}

// Joint density, at unit scale and unrestricted location, of the
// differences (Y_1 - Y_n, ..., Y_{n-1} - Y_n). Evaluated from scratch on
// the augmented configuration (x_1, ..., x_{n-1}, 0) each call: this is
// the oracle path and stays structurally independent of the closed form.
double diff_density(const std::vector<double>& diffs) {
    const std::size_t n = diffs.size() + 1;
    CompensatedSum sum;
    double low = 0.0;
    for (double d : diffs) {
        sum.add(d);
        low = std::min(low, d);
    }
    const double mean = sum.value() / static_cast<double>(n);
    CompensatedSum devsq;
    for (double d : diffs) devsq.add((d - mean) * (d - mean));
    devsq.add(mean * mean);
    const double rn = std::sqrt(static_cast<double>(n));
    const double upper_mass = 1.0 - normal_cdf(rn * (mean - low));
    return std::sqrt(2.0 * M_PI) / rn *
           std::pow(2.0 / M_PI, 0.5 * static_cast<double>(n)) *
           std::exp(-0.5 * devsq.value()) * upper_mass;
}

// \int_0^inf v^k f'(v y') dv with f' above and y'_i = y_i - y_n.
// Integrated in s = log v: the substitution spreads the sharp peak over
// an O(1) window, and the integration window is clipped where the
// transformed integrand has fallen to 1e-18 of its peak. Certification
// is by whole/split agreement; the built-in error report is uselessly
// conservative for this integrand family.
double moment_integral(const std::vector<double>& diffs, int k) {
    std::vector<double> scaled(diffs.size());
    auto integrand = [&](double v) {
        for (std::size_t i = 0; i < diffs.size(); ++i) scaled[i] = v * diffs[i];
        return std::pow(v, k) * diff_density(scaled);
    };
    auto in_log = [&](double s) {
        const double v = std::exp(s);
        return v * integrand(v);
    };
    double g_peak = 0.0;
    double s_peak = 0.0;
    for (int j = -30; j <= 30; ++j) {
        const double s = j * M_LN2;
        const double g = in_log(s);
        if (g > g_peak) {
            g_peak = g;
            s_peak = s;
        }
    }
    if (!(g_peak > 0.0))
        throw NumericalError("moment_integral: integrand vanished on probe grid");
    double s_lo = s_peak;
    for (int i = 0; i < 80 && in_log(s_lo) > 1e-18 * g_peak; ++i) s_lo -= 1.0;
    double s_hi = s_peak;
    for (int i = 0; i < 80 && in_log(s_hi) > 1e-18 * g_peak; ++i) s_hi += 1.0;
    const double abs_tol = std::max(g_peak * 1e-9, 1e-280);
    return integrate_verified(in_log, s_lo, s_hi, abs_tol);
}

} // namespace

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2) throw DomainError("Sample: need at least two observations");
    for (double v : values_)
        if (!std::isfinite(v)) throw DomainError("Sample: non-finite observation");
    min_ = *std::min_element(values_.begin(), values_.end());
    CompensatedSum sum;
    for (double v : values_) sum.add(v);
    mean_ = sum.value() / static_cast<double>(values_.size());
    CompensatedSum devsq;
    for (double v : values_) devsq.add((v - mean_) * (v - mean_));
    variance_ = devsq.value() / static_cast<double>(values_.size() - 1);
    if (variance_ < 0.0) variance_ = 0.0;
    sd_ = std::sqrt(variance_);
}

CnValue::CnValue(int n_, double value_) : n(n_), value(value_) {
    if (n < 1) throw DomainError("CnValue: n must be at least 1");
    if (!std::isfinite(value)) throw DomainError("CnValue: non-finite value");
    constexpr double kSlack = 1e-9;
    if (n == 1) {
        if (std::abs(value - kRoot2OverPi) > kSlack)
            throw DomainError("CnValue: c_1 must equal sqrt(2/pi)");
        return;
    }
    if (!(value > 0.0) || !(value < kRoot2OverPi))
        throw DomainError("CnValue: value outside (0, sqrt(2/pi))");
    if (value > kRootPiOver2 / n + kSlack)
        throw DomainError("CnValue: value violates the 1/n sqrt(pi/2) bound");
    if (value > normal_quantile(0.5 + 0.5 / n) + kSlack)
        throw DomainError("CnValue: value violates the normal-quantile bound");
}

CnValue c_n_quadrature(int n) {
    if (n < 1) throw DomainError("c_n_quadrature: n must be at least 1");
    auto integrand = [n](double t) {
        return std::pow(std::erfc(t / std::sqrt(2.0)), n);
    };
    return CnValue(n, integrate_truncated_upper(integrand, 0.0, 1e-9));
}

double c_n_mc(int n, const RandomStream& stream, std::uint64_t reps) {
    if (n < 1) throw DomainError("c_n_mc: n must be at least 1");
    if (reps < 1) throw DomainError("c_n_mc: reps must be at least 1");
    auto eng = stream.engine();
    CompensatedSum sum;
    for (std::uint64_t r = 0; r < reps; ++r) {
        double best = std::abs(std_normal_draw(eng));
        for (int i = 1; i < n; ++i)
            best = std::min(best, std::abs(std_normal_draw(eng)));
        sum.add(best);
    }
    return sum.value() / static_cast<double>(reps);
}

double unbiased_location(const Sample& sample, const CnValue& cn) {
    require_matching(sample, cn, "unbiased_location");
    return (kRoot2OverPi * sample.min() - cn.value * sample.mean()) /
           (kRoot2OverPi - cn.value);
}

double unbiased_scale(const Sample& sample, const CnValue& cn) {
    require_matching(sample, cn, "unbiased_scale");
    return (sample.mean() - sample.min()) / (kRoot2OverPi - cn.value);
}

double unbiased_scale_sq(const Sample& sample) {
    return M_PI / (M_PI - 2.0) * sample.variance();
}

double mle_location(const Sample& sample) { return sample.min(); }

double mle_scale(const Sample& sample) {
    CompensatedSum devsq;
    for (double y : sample.values())
        devsq.add((y - sample.min()) * (y - sample.min()));
    return std::sqrt(devsq.value() / static_cast<double>(sample.n()));
}

double mre_scale(const Sample& sample) {
    if (!(sample.sd() > 0.0))
        throw DegenerateSampleError("mre_scale: constant sample");
    const double n = static_cast<double>(sample.n());
    const double q = (sample.mean() - sample.min()) / sample.sd();
    const double tail_hi = student_t_tail(static_cast<int>(sample.n()) + 1,
                                          std::sqrt(n * (n + 1.0) / (n - 1.0)) * q);
    const double tail_lo = student_t_tail(static_cast<int>(sample.n()) + 2,
                                          std::sqrt(n * (n + 2.0) / (n - 1.0)) * q);
    return std::sqrt((n - 1.0) / 2.0) * gamma_ratio((n + 1.0) / 2.0, (n + 2.0) / 2.0) *
           (tail_hi / tail_lo) * sample.sd();
}

double mre_scale_oracle(const Sample& sample) {
    if (sample.n() < 3) throw DomainError("mre_scale_oracle: need n >= 3");
    if (!(sample.sd() > 0.0))
        throw DegenerateSampleError("mre_scale_oracle: constant sample");
    const std::vector<double>& y = sample.values();
    std::vector<double> diffs(y.begin(), y.end() - 1);
    for (double& d : diffs) d -= y.back();
    const int n = static_cast<int>(sample.n());
    return moment_integral(diffs, n) / moment_integral(diffs, n + 1);
}

double pitman_location_known_scale(const Sample& sample, double eta0) {
    if (!(eta0 > 0.0) || !std::isfinite(eta0))
        throw DomainError("pitman_location_known_scale: eta0 must be positive");
    const double n = static_cast<double>(sample.n());
    const double gap = sample.min() - sample.mean();
    return sample.mean() -
           eta0 / std::sqrt(n) * normal_hazard_lower(std::sqrt(n) / eta0 * gap);
}

double pitman_location_oracle(const Sample& sample, double eta0) {
    if (!(eta0 > 0.0) || !std::isfinite(eta0))
        throw DomainError("pitman_location_oracle: eta0 must be positive");
    const double n = static_cast<double>(sample.n());
    const double ybar = sample.mean();
    const double ymin = sample.min();
    const double gap_sq = (ymin - ybar) * (ymin - ybar);
    // The joint density of the shifted sample is proportional to
    // exp(-n (u - ybar)^2 / (2 eta0^2)) on u <= ymin; dividing by its value
    // at u = ymin keeps the integrand in [0, 1]. Truncate where the scaled
    // integrand drops to 1e-16.
    const double scale = 0.5 * n / (eta0 * eta0);
    auto density = [&](double u) {
        return std::exp(-scale * ((u - ybar) * (u - ybar) - gap_sq));
    };
    const double u_lo =
        ybar - std::sqrt(gap_sq + 16.0 * std::log(10.0) / scale);
    const double width = ymin - u_lo;
    const double u_scale = std::max({1.0, std::abs(u_lo), std::abs(ymin)});
    const double den =
        integrate_verified(density, u_lo, ymin, 1e-9 * width);
    const double num = integrate_verified([&](double u) { return u * density(u); },
                                          u_lo, ymin, 1e-9 * width * u_scale);
    return num / den;
}

double mre_scale_known_location(const Sample& sample, double xi0) {
    require_support(sample, xi0, "mre_scale_known_location");
    const double n = static_cast<double>(sample.n());
    return gamma_ratio((n + 1.0) / 2.0, (n + 2.0) / 2.0) / std::sqrt(2.0) *
           std::sqrt(sum_sq_about(sample, xi0));
}

double mvue_scale_known_location(const Sample& sample, double xi0) {
    require_support(sample, xi0, "mvue_scale_known_location");
    const double n = static_cast<double>(sample.n());
    return gamma_ratio(n / 2.0, (n + 1.0) / 2.0) / std::sqrt(2.0) *
           std::sqrt(sum_sq_about(sample, xi0));
}

} // namespace besimc
