#pragma once

#include "ruin/model.hpp"

namespace ruin {

// Closed-form survival probabilities. Every function returns exactly 0 when
// either endowment is 0, throws std::domain_error for negative or NaN
// endowments and ParamError when the parameters fall outside the regime the
// formula is valid for.

// Independent Brownian motions, delta = 0, mu_bar = 1 (McKean & Shepp):
//   V = 1 - exp(-2m) - 2m exp(-x-y),  m = min(x, y).
double value_mckean_shepp(double x, double y);

// Independent Brownian motions with delta in (-min(mu1, mu2), 0), evaluated
// exactly as published:
//   V = 1 - exp(-(mu_bar+delta) m) - (mu_bar+delta)/delta exp(-mu_bar(x+y)) (1 - exp(-2 delta m)).
// Note: this expression does not reduce to value_mckean_shepp as delta -> 0
// (the first exponent lacks a factor 2) and its x -> inf limit disagrees with
// the HJB boundary condition 1 - exp(-2(mu_bar+delta) y). Simulation agrees
// with the factor-2 version; see tests/test_closed_forms.cpp.
double value_grandits(double x, double y, const ModelParams& params);

// rho = 1, delta = 0, mu_bar = 1, unit diffusion coefficients.
double value_rho1_unit(double x, double y);

struct ExtendedCoefficients {
    double N = 0;  // sqrt(sigma2 (sigma1 y - sigma2 x) eta)
    double A = 0;  // 2 mu_bar + delta (sigma1 + sigma2)
    double B = 0;  // (mu_bar + delta sigma2)(sigma1 + sigma2) - 2 mu_bar sigma1
    double C = 0;  // delta sigma1^2 + 3 delta sigma1 sigma2 + 2 (mu_bar + delta sigma2) sigma2
};

// Coefficients of the rho = 1 extended-model value function. N is NaN below
// the diagonal sigma1 y < sigma2 x.
ExtendedCoefficients extended_coefficients(double x, double y, const ModelParams& params);

// rho = 1 with diffusion coefficients sigma1, sigma2 and the extended delta
// bound delta > -mu_bar/(sigma1+sigma2). Only mu_bar, sigma1, sigma2, delta
// enter. Below the diagonal uses V(x,y;s1,s2) = V(y,x;s2,s1).
double value_rho1_extended(double x, double y, const ModelParams& params);

struct SurvivalCoefficients {
    double L = 0;    // sqrt((sigma1 y - sigma2 x)(mu1 sigma2 - mu2 sigma1)), NaN if the product is negative
    double D12 = 0;  // mu1 - 2 mu2 sigma1 / sigma2
    double D21 = 0;  // mu2 - 2 mu1 sigma2 / sigma1
};

SurvivalCoefficients survival_coefficients(double x, double y, const ModelParams& params);

// Joint survival probability of both firms without transfers (u = mu1),
// rho = 1, mu1, mu2 > 0.
double survival_no_collab(double x, double y, const ModelParams& params);

// value_rho1_extended - survival_no_collab. Negative values are possible when
// delta < -min(mu1/sigma1, mu2/sigma2) (forced collaboration).
double gain_of_collaboration(double x, double y, const ModelParams& params);

enum class Axis { XToInfinity, YToInfinity };

// Limit of the value function when one endowment grows without bound:
//   x -> inf: 1 - exp(-2 (mu_bar + delta sigma1) y / sigma2^2)
//   y -> inf: 1 - exp(-2 (mu_bar + delta sigma2) x / sigma1^2)
double boundary_asymptote(Axis axis, double coordinate, const ModelParams& params);

// True when (x, y) lies on the policy switching line within the tolerance
// used by value_rho1_extended.
bool on_diagonal(double x, double y, const ModelParams& params);

}  // namespace ruin
