#include "ruin/normal.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ruin {

namespace {

// 1/sqrt(2) split into a double and its rounding error.
constexpr double kInvSqrt2Hi = 0.70710678118654757;
constexpr double kInvSqrt2Lo = -4.8336466567264567e-17;
constexpr double kTwoOverSqrtPi = 1.1283791670955126;
constexpr double kLogSqrt2Pi = 0.91893853320467274;

}  // namespace

double norm_cdf(double z)
{
    if (std::isnan(z)) throw std::domain_error("norm_cdf: NaN argument");
    if (z > 40) return 1.0;
    if (z < -40) return 0.0;

    const double a = -z * kInvSqrt2Hi;
    // Exact residual of the product plus the constant's own rounding error.
    const double err = std::fma(-z, kInvSqrt2Hi, -a) + (-z) * kInvSqrt2Lo;
    const double base = std::erfc(a);
    // d/da erfc(a) = -2/sqrt(pi) exp(-a^2)
    const double corrected = base - kTwoOverSqrtPi * std::exp(-a * a) * err;
    return 0.5 * corrected;
}

double norm_pdf(double z)
{
    return std::exp(-0.5 * z * z - kLogSqrt2Pi);
}

double log_norm_cdf(double z)
{
    if (std::isnan(z)) throw std::domain_error("log_norm_cdf: NaN argument");
    if (z > -30) return std::log(norm_cdf(z));
    // Mills-ratio asymptotic series; at |z| >= 30 five terms are exact to
    // double precision.
    const double r = 1.0 / (z * z);
    const double series = 1 - r * (1 - 3 * r * (1 - 5 * r * (1 - 7 * r)));
    return -0.5 * z * z - std::log(-z) - kLogSqrt2Pi + std::log(series);
}

double exp_times_cdf(double exponent, double z)
{
    if (exponent < -745.2) return 0.0;
    const double p = norm_cdf(z);
    if (exponent <= 700 && p > 1e-290) return std::exp(exponent) * p;
    const double log_term = exponent + log_norm_cdf(z);
    if (log_term < -745.2) return 0.0;
    return std::exp(log_term);
}

}  // namespace ruin
