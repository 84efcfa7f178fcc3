#include "ruin/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ruin {

namespace {

std::string describe(const std::string& constraint, const ModelParams& p)
{
    std::ostringstream os;
    os << "invalid model parameters (" << constraint << "): mu1=" << p.mu1 << " mu2=" << p.mu2
       << " mu_bar=" << p.mu_bar << " sigma1=" << p.sigma1 << " sigma2=" << p.sigma2
       << " rho=" << p.rho << " delta=" << p.delta;
    return os.str();
}

}  // namespace

std::string first_violation(const ModelParams& p, ModelKind kind)
{
    for (double v : {p.mu1, p.mu2, p.mu_bar, p.sigma1, p.sigma2, p.rho, p.delta})
        if (!std::isfinite(v)) return "finite";

    // mu1 + mu2 is compared with a few ulps of slack so that decimal inputs
    // such as 0.1 + 0.2 vs 0.3 are accepted.
    const double scale = std::max({1.0, std::abs(p.mu1), std::abs(p.mu2), std::abs(p.mu_bar)});
    if (std::abs(p.mu1 + p.mu2 - p.mu_bar) > 8 * 2.220446049250313e-16 * scale) return "mu_bar_consistency";
    if (!(p.mu_bar > 0)) return "mu_bar_positive";
    if (!(p.sigma1 > 0) || !(p.sigma2 > 0)) return "sigma_positive";
    if (p.rho < -1 || p.rho > 1) return "rho_range";

    if (kind == ModelKind::Base) {
        if (p.sigma1 != 1.0 || p.sigma2 != 1.0) return "unit_sigma";
        if (!(p.mu1 > 0) || !(p.mu2 > 0)) return "mu_positive";
        if (!(p.delta > -std::min(p.mu1, p.mu2))) return "delta_lower_bound";
    } else {
        if (!(p.eta() > 0)) return "delta_lower_bound";
    }
    return {};
}

void validate(const ModelParams& params, ModelKind kind)
{
    if (auto c = first_violation(params, kind); !c.empty()) throw ParamError(c, describe(c, params));
}

std::string to_string(const Policy& policy)
{
    switch (policy.kind) {
    case Policy::Kind::PushBottom:
        return "push-bottom";
    case Policy::Kind::NoCollaboration:
        return "none";
    case Policy::Kind::Constant: {
        std::ostringstream os;
        os.precision(17);
        os << "constant:" << policy.u0;
        return os.str();
    }
    }
    return "unknown";
}

Policy parse_policy(const std::string& text)
{
    if (text == "push-bottom") return Policy::push_bottom();
    if (text == "none") return Policy::no_collaboration();
    const std::string prefix = "constant:";
    if (text.rfind(prefix, 0) == 0) {
        const std::string rest = text.substr(prefix.size());
        std::size_t used = 0;
        double u = 0;
        try {
            u = std::stod(rest, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != rest.size() || !std::isfinite(u))
            throw std::invalid_argument("bad constant policy drift: '" + rest + "'");
        return Policy::constant(u);
    }
    throw std::invalid_argument("unknown policy '" + text + "' (expected push-bottom, none or constant:<u>)");
}

}  // namespace ruin
