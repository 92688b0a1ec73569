#include "skewlap/special.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>

namespace skewlap {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kSqrtPi = 1.7724538509055160273;
}  // namespace

double erfcx_positive(double z) {
    if (z < 20.0) {
        // exp(z^2) stays far below overflow and std::erfc is still accurate here.
        return std::exp(z * z) * std::erfc(z);
    }
    // Asymptotic series; the omitted term is below 3e-13 relative for z >= 20.
    const double iz2 = 1.0 / (z * z);
    const double series =
        1.0 + iz2 * (-0.5 + iz2 * (0.75 + iz2 * (-1.875 + iz2 * (6.5625 - iz2 * 29.53125))));
    return series / (z * kSqrtPi);
}

double std_normal_pdf(double x) { return std::exp(-0.5 * x * x - 0.5 * kLog2Pi); }

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double std_normal_log_cdf(double x) {
    if (x > -1.0) return std::log(std_normal_cdf(x));
    // Phi(x) = exp(-x^2/2) erfcx(-x/sqrt(2)) / 2 for x < 0.
    return -0.5 * x * x + std::log(0.5 * erfcx_positive(-x * kInvSqrt2));
}

double inverse_mills(double x) {
    if (x > -1.0) return std_normal_pdf(x) / std_normal_cdf(x);
    // phi(x)/Phi(x) = sqrt(2/pi) / erfcx(-x/sqrt(2)) for x < 0.
    return 2.0 / (kSqrt2Pi * erfcx_positive(-x * kInvSqrt2));
}

double logistic(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double log_logistic(double x) {
    if (x >= 0.0) return -std::log1p(std::exp(-x));
    return x - std::log1p(std::exp(x));
}

double gamma_p(double a, double x) {
    if (x <= 0.0) return 0.0;
    return boost::math::gamma_p(a, x);
}

}  // namespace skewlap
