#pragma once

#include <cstdint>
#include <vector>

#include "besimc/rng.hpp"

namespace besimc {

// Ordered sample (y_1,...,y_n), n >= 2, with cached summary statistics.
class Sample {
  public:
    explicit Sample(std::vector<double> values);

    const std::vector<double>& values() const { return values_; }
    std::size_t n() const { return values_.size(); }
    double min() const { return min_; }
    double mean() const { return mean_; }
    // S^2 with the n-1 denominator.
    double variance() const { return variance_; }
    double sd() const { return sd_; }

  private:
    std::vector<double> values_;
    double min_;
    double mean_;
    double variance_;
    double sd_;
};

// c_n = E(min(|Z_1|,...,|Z_n|)). Construction checks the Lemma bounds,
// so a bad quadrature result cannot propagate silently.
struct CnValue {
    int n;
    double value;

    CnValue(int n_, double value_);
};

CnValue c_n_quadrature(int n);
double c_n_mc(int n, const RandomStream& stream, std::uint64_t reps);

double unbiased_location(const Sample& sample, const CnValue& cn);
double unbiased_scale(const Sample& sample, const CnValue& cn);
double unbiased_scale_sq(const Sample& sample);

double mle_location(const Sample& sample);
double mle_scale(const Sample& sample);

double mre_scale(const Sample& sample);
// Quadrature route through the ancillary-difference density; verification
// oracle for mre_scale, not a production path.
double mre_scale_oracle(const Sample& sample);

double pitman_location_known_scale(const Sample& sample, double eta0);
// Direct ratio-of-integrals route; verification oracle for the closed form.
double pitman_location_oracle(const Sample& sample, double eta0);

double mre_scale_known_location(const Sample& sample, double xi0);
double mvue_scale_known_location(const Sample& sample, double xi0);

} // namespace besimc
