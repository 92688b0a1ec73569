// Scalar special functions used across the library. The complementary-form
// evaluations keep probit likelihoods and far-tail skewing factors finite for
// large |argument|.
#pragma once

namespace skewlap {

inline constexpr double kLog2Pi = 1.8378770664093454836;
inline constexpr double kSqrt2Pi = 2.5066282746310005024;

// Scaled complementary error function exp(z^2) erfc(z), z >= 0.
double erfcx_positive(double z);

// Standard normal pdf, cdf and log-cdf. cdf/log_cdf are cancellation-free on
// the whole line.
double std_normal_pdf(double x);
double std_normal_cdf(double x);
double std_normal_log_cdf(double x);

// phi(x)/Phi(x), the inverse Mills ratio; stable for very negative x.
double inverse_mills(double x);

// Logistic function and its log, without overflow on either tail.
double logistic(double x);
double log_logistic(double x);

// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

}  // namespace skewlap
