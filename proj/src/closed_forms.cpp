#include "ruin/closed_forms.hpp"

#include "ruin/normal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ruin {

namespace {

void check_endowments(double x, double y, const char* who)
{
    if (std::isnan(x) || std::isnan(y) || x < 0 || y < 0)
        throw std::domain_error(std::string(who) + ": endowments must be non-negative numbers");
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

void require_rho_one(const ModelParams& p)
{
    if (p.rho != 1.0) throw ParamError("rho_one", "closed form requires rho = 1");
}

// Off-diagonal branch, caller guarantees sigma1 y > sigma2 x.
double extended_above(double x, double y, double mu, double s1, double s2, double d)
{
    const double S = s1 + s2;
    const double eta = mu + d * S;
    const double N = std::sqrt(s2 * (s1 * y - s2 * x) * eta);
    const double A = 2 * mu + d * S;
    const double B = (mu + d * s2) * S - 2 * mu * s1;
    const double C = d * s1 * s1 + 3 * d * s1 * s2 + 2 * (mu + d * s2) * s2;
    const double ratio = s2 / s1;

    const double t1 = norm_cdf((d * s2 * x + (mu + d * s2) * y) / N);
    const double t2 = exp_times_cdf(-2 * mu * (x + y) / (S * S), (A * s2 * x + B * y) / (S * N));
    const double t3 = exp_times_cdf(-2 * (mu + d * s2) * x / (s1 * s1),
                                    ((mu + d * s2) * y - (A + d * s2) * ratio * x) / N);
    const double t4 = exp_times_cdf(-2 * mu * y / (S * S) - 2 * s2 * x / (s1 * s1) * (mu * s2 / (S * S) + d),
                                    (B * y - C * ratio * x) / (S * N));
    return clamp01(t1 - t2 - t3 + t4);
}

}  // namespace

double value_mckean_shepp(double x, double y)
{
    check_endowments(x, y, "value_mckean_shepp");
    const double m = std::min(x, y);
    if (m == 0) return 0.0;
    return clamp01(-std::expm1(-2 * m) - 2 * m * std::exp(-x - y));
}

double value_grandits(double x, double y, const ModelParams& p)
{
    check_endowments(x, y, "value_grandits");
    validate(p, ModelKind::Base);
    if (p.rho != 0.0) throw ParamError("rho_zero", "Grandits formula requires rho = 0");
    if (!(p.delta < 0)) throw ParamError("delta_negative", "Grandits formula requires delta < 0");
    const double m = std::min(x, y);
    if (m == 0) return 0.0;
    const double mu = p.mu_bar;
    const double d = p.delta;
    return -std::expm1(-(mu + d) * m) - (mu + d) / d * std::exp(-mu * (x + y)) * (-std::expm1(-2 * d * m));
}

double value_rho1_unit(double x, double y)
{
    check_endowments(x, y, "value_rho1_unit");
    if (x == 0 || y == 0) return 0.0;
    if (x == y) return -std::expm1(-x);
    const double lo = std::min(x, y);
    const double hi = std::max(x, y);
    const double gap = hi - lo;
    const double s = std::sqrt(gap);
    const double v = norm_cdf(hi / s) - exp_times_cdf(-2 * lo, (gap - lo) / s)
                     - std::exp(-(x + y) / 2) * (2 * norm_cdf(lo / s) - 1);
    return clamp01(v);
}

bool on_diagonal(double x, double y, const ModelParams& p)
{
    const double a = p.sigma1 * y;
    const double b = p.sigma2 * x;
    return std::abs(a - b) < 1e-12 * (1 + a + b);
}

ExtendedCoefficients extended_coefficients(double x, double y, const ModelParams& p)
{
    const double S = p.sigma1 + p.sigma2;
    const double gap = p.sigma1 * y - p.sigma2 * x;
    ExtendedCoefficients c;
    c.N = gap >= 0 ? std::sqrt(p.sigma2 * gap * p.eta()) : std::numeric_limits<double>::quiet_NaN();
    c.A = 2 * p.mu_bar + p.delta * S;
    c.B = (p.mu_bar + p.delta * p.sigma2) * S - 2 * p.mu_bar * p.sigma1;
    c.C = p.delta * p.sigma1 * p.sigma1 + 3 * p.delta * p.sigma1 * p.sigma2
          + 2 * (p.mu_bar + p.delta * p.sigma2) * p.sigma2;
    return c;
}

double value_rho1_extended(double x, double y, const ModelParams& p)
{
    check_endowments(x, y, "value_rho1_extended");
    validate(p, ModelKind::Extended);
    require_rho_one(p);
    if (x == 0 || y == 0) return 0.0;
    const double mu = p.mu_bar;
    if (on_diagonal(x, y, p)) return -std::expm1(-2 * mu * x / (p.sigma1 * (p.sigma1 + p.sigma2)));
    if (p.sigma1 * y > p.sigma2 * x) return extended_above(x, y, mu, p.sigma1, p.sigma2, p.delta);
    return extended_above(y, x, mu, p.sigma2, p.sigma1, p.delta);
}

SurvivalCoefficients survival_coefficients(double x, double y, const ModelParams& p)
{
    SurvivalCoefficients c;
    const double prod = (p.sigma1 * y - p.sigma2 * x) * (p.mu1 * p.sigma2 - p.mu2 * p.sigma1);
    c.L = prod >= 0 ? std::sqrt(prod) : std::numeric_limits<double>::quiet_NaN();
    c.D12 = p.mu1 - 2 * p.mu2 * p.sigma1 / p.sigma2;
    c.D21 = p.mu2 - 2 * p.mu1 * p.sigma2 / p.sigma1;
    return c;
}

double survival_no_collab(double x, double y, const ModelParams& p)
{
    check_endowments(x, y, "survival_no_collab");
    validate(p, ModelKind::Extended);
    require_rho_one(p);
    if (!(p.mu1 > 0) || !(p.mu2 > 0)) throw ParamError("mu_positive", "survival_no_collab requires mu1, mu2 > 0");
    if (x == 0 || y == 0) return 0.0;

    const double s1 = p.sigma1;
    const double s2 = p.sigma2;
    const double m1 = p.mu1;
    const double m2 = p.mu2;
    // Compare mu1/s1 vs mu2/s2 and x/s1 vs y/s2 without dividing.
    const double drift_order = m1 * s2 - m2 * s1;
    const double level_order = x * s2 - y * s1;
    const bool one_binding = drift_order == 0 || (drift_order > 0 && level_order >= 0)
                             || (drift_order < 0 && level_order <= 0);
    if (one_binding) return clamp01(-std::expm1(-2 * std::min(m1 * x / (s1 * s1), m2 * y / (s2 * s2))));

    const auto c = survival_coefficients(x, y, p);
    const double e1 = -2 * m1 * x / (s1 * s1);
    const double e2 = -2 * m2 * y / (s2 * s2);
    const double m = std::min(m2 * x, m1 * y);
    const double v = norm_cdf(std::abs(m1 * y - m2 * x) / c.L) - exp_times_cdf(e1, (m1 * y + c.D21 * x) / c.L)
                     - exp_times_cdf(e2, (m2 * x + c.D12 * y) / c.L)
                     + exp_times_cdf(e1 + e2 + 4 * m / (s1 * s2), (c.D21 * x + c.D12 * y + 2 * m) / c.L);
    return clamp01(v);
}

double gain_of_collaboration(double x, double y, const ModelParams& p)
{
    return value_rho1_extended(x, y, p) - survival_no_collab(x, y, p);
}

double boundary_asymptote(Axis axis, double coordinate, const ModelParams& p)
{
    validate(p, ModelKind::Extended);
    if (std::isnan(coordinate) || coordinate < 0)
        throw std::domain_error("boundary_asymptote: coordinate must be non-negative");
    if (coordinate == 0) return 0.0;
    if (axis == Axis::XToInfinity)
        return -std::expm1(-2 * (p.mu_bar + p.delta * p.sigma1) * coordinate / (p.sigma2 * p.sigma2));
    return -std::expm1(-2 * (p.mu_bar + p.delta * p.sigma2) * coordinate / (p.sigma1 * p.sigma1));
}

}  // namespace ruin
