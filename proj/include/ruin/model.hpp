#pragma once

#include <stdexcept>
#include <string>

namespace ruin {

// Parameterisation of the two-firm endowment model.
//
//   X_t = x + sigma1 W_t + int u_s ds
//   Y_t = y + sigma2 What_t + int (mu_bar - u_s) ds,   What = rho W + sqrt(1-rho^2) W2
//
// with the drift allocation u_s restricted to [-delta*sigma1, mu_bar + delta*sigma2].
// The base model has sigma1 = sigma2 = 1.
struct ModelParams {
    double mu1 = 0.5;
    double mu2 = 0.5;
    double mu_bar = 1.0;
    double sigma1 = 1.0;
    double sigma2 = 1.0;
    double rho = 0.0;
    double delta = 0.0;

    // Lower and upper end of the admissible drift interval for firm 1.
    double drift_low() const { return -delta * sigma1; }
    double drift_high() const { return mu_bar + delta * sigma2; }

    // mu_bar + delta (sigma1 + sigma2); positive iff the extended delta bound holds.
    double eta() const { return mu_bar + delta * (sigma1 + sigma2); }

    bool operator==(const ModelParams&) const = default;
};

enum class ModelKind { Base, Extended };

// Thrown by validate(); constraint() names the first violated invariant.
class ParamError : public std::invalid_argument {
public:
    ParamError(std::string constraint, const std::string& what)
        : std::invalid_argument(what), constraint_(std::move(constraint)) {}

    const std::string& constraint() const noexcept { return constraint_; }

private:
    std::string constraint_;
};

// Checks every invariant of `params` for the given model kind and throws
// ParamError on the first violation. Constraint names:
//   "finite", "mu_bar_consistency", "mu_bar_positive", "sigma_positive",
//   "rho_range", "unit_sigma", "mu_positive", "delta_lower_bound".
void validate(const ModelParams& params, ModelKind kind);

// Non-throwing variant: empty string when valid, else the constraint name.
std::string first_violation(const ModelParams& params, ModelKind kind);

struct State {
    double x = 0.0;
    double y = 0.0;
};

// Transfer rules. PushBottom gives the whole admissible drift to the firm
// whose scaled endowment (x/sigma1 vs y/sigma2) is lower; ties go to firm 1.
// NoCollaboration keeps u = mu1 (no transfers). Constant holds u at `u0`,
// clamped into the admissible interval.
struct Policy {
    enum class Kind { PushBottom, NoCollaboration, Constant };

    Kind kind = Kind::PushBottom;
    double u0 = 0.0;

    static Policy push_bottom() { return {Kind::PushBottom, 0.0}; }
    static Policy no_collaboration() { return {Kind::NoCollaboration, 0.0}; }
    static Policy constant(double u) { return {Kind::Constant, u}; }
};

// Drift allocated to firm 1 at state `s`. Always inside
// [params.drift_low(), params.drift_high()].
inline double policy_drift(const Policy& policy, const State& s, const ModelParams& params)
{
    switch (policy.kind) {
    case Policy::Kind::PushBottom:
        // y >= (sigma2/sigma1) x, written without the division
        return params.sigma1 * s.y >= params.sigma2 * s.x ? params.drift_high() : params.drift_low();
    case Policy::Kind::NoCollaboration:
        return params.mu1;
    case Policy::Kind::Constant:
        if (policy.u0 < params.drift_low()) return params.drift_low();
        if (policy.u0 > params.drift_high()) return params.drift_high();
        return policy.u0;
    }
    return params.mu1;
}

// Transfer rate c = u - mu1 paid from firm 2 to firm 1.
inline double transfer_rate(const Policy& policy, const State& s, const ModelParams& params)
{
    return policy_drift(policy, s, params) - params.mu1;
}

std::string to_string(const Policy& policy);

// Parses "push-bottom", "none" or "constant:<u>". Throws std::invalid_argument.
Policy parse_policy(const std::string& text);

}  // namespace ruin
