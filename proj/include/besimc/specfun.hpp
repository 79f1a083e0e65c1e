#pragma once

namespace besimc {

// A probability value, invariant 0 <= value <= 1. Construction through
// make() validates and clips sub-ulp excursions produced by rounding.
struct Probability {
    double value = 0.0;

    static Probability make(double v);
    operator double() const { return value; }
};

// Standard normal CDF, absolute error below 1e-12.
Probability normal_cdf(double x);

// Standard normal quantile for p in (0,1); round-trips through
// normal_cdf to 1e-10.
double normal_quantile(double p);

// log Gamma(x) for x > 0.
double log_gamma(double x);

// Regularized incomplete beta I_x(a,b), a,b > 0, x in [0,1].
Probability regularized_incomplete_beta(double a, double b, double x);

// Upper tail P(T >= x) of Student's t with nu degrees of freedom.
Probability student_t_tail(int nu, double x);

} // namespace besimc
