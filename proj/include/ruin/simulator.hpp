#pragma once

#include "ruin/model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ruin {

struct SimConfig {
    double dt = 1e-3;
    double horizon = 50.0;
    std::int64_t n_paths = 10000;
    std::uint64_t seed = 42;
    bool bridge_correction = true;
    bool antithetic = false;
    // Worker threads; 0 uses std::thread::hardware_concurrency(). Results do
    // not depend on this value.
    unsigned threads = 0;
    // A path is counted as surviving once min(x/sigma1, y/sigma2) reaches the
    // level at which the residual ruin probability is below this tolerance
    // (see absorb_level). 0 disables the cutoff.
    double absorb_tolerance = 1e-6;

    // Defaults with the horizon scaled to 50 / mu_bar.
    static SimConfig defaults_for(const ModelParams& params);
};

// Throws std::invalid_argument for non-positive dt/horizon, dt > horizon,
// n_paths < 1 or a negative tolerance.
void validate(const SimConfig& config);

struct PathState {
    double t = 0;
    double x = 0;
    double y = 0;
    double w1 = 0;  // W
    double w2 = 0;  // W2, independent of W; What = rho w1 + sqrt(1-rho^2) w2
    bool ruined = false;
    std::optional<double> ruin_time;

    static PathState start(double x, double y) { return {0, x, y, 0, 0, false, std::nullopt}; }
};

// Standard normals driving one step plus the uniform used for the
// Brownian-bridge crossing test (ignored without bridge correction).
struct StepNoise {
    double g1 = 0;
    double g2 = 0;
    double u = 1;
};

// One Euler-Maruyama step of the controlled pair. The drift is evaluated at
// the start state. Ruin is declared when min(x, y) <= 0 after the step or,
// with bridge correction, when noise.u < 1 - (1 - p_x)(1 - p_y) where
// p_i = exp(-2 d_start d_end / (sigma_i^2 dt)); the two crossings are treated
// as independent. A ruined state is returned unchanged.
PathState step_xy(const PathState& state, const Policy& policy, const ModelParams& params,
                  const SimConfig& config, const StepNoise& noise);

struct Estimate {
    double p_hat = 0;  // survival probability estimate
    double std_err = 0;
    double ci_low = 0;
    double ci_high = 0;
    std::int64_t n_paths = 0;
    std::int64_t survivors = 0;
    std::string horizon_bias_note;
};

// Binomial estimate with a 95% normal-approximation interval clipped to [0, 1].
Estimate make_estimate(std::int64_t survivors, std::int64_t n_paths, std::string note = {});

// Scaled endowment min(x/sigma1, y/sigma2) above which a path is counted as
// surviving under `policy`: log(1/tolerance) / (2 kappa) with kappa the
// slowest one-dimensional escape rate the policy can leave a firm with.
// +inf when the policy can leave a firm with non-positive drift or when
// tolerance is 0.
double absorb_level(const Policy& policy, const ModelParams& params, double tolerance);

// Survival probability P[tau > horizon] of the controlled pair from (x, y).
// Path i draws from its own stream seeded with (seed, i) (with antithetic
// variates, paths 2k and 2k+1 share stream k with negated normals), so the
// result is bit-identical for any thread count.
Estimate estimate_ruin(double x, double y, const Policy& policy, const ModelParams& params,
                       const SimConfig& config);

// One Euler step of dZ = -(mu_bar + 2 delta) sign(Z) dt + sqrt(2(1-rho)) dB,
// sign(0) = 0.
double sign_sde_step(double z, const ModelParams& params, double dt, double g);

// Euler path of the sign-drift SDE from z0 on [0, horizon], including the
// initial value (n_steps + 1 entries). Uses stream (seed, 0).
std::vector<double> simulate_sign_sde(double z0, const ModelParams& params, const SimConfig& config);

// rho = -1 formulation: Z = Y - X follows the sign-drift SDE with diffusion 2
// and ruin is |Z_t| >= x + y + mu_bar t. Requires the base model with rho = -1.
Estimate estimate_ruin_reflected(double x, double y, const ModelParams& params, const SimConfig& config);

// Number of Euler steps covering [0, horizon].
std::int64_t step_count(const SimConfig& config);

}  // namespace ruin
