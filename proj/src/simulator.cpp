#include "ruin/simulator.hpp"

#include "xoshiro.hpp"

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ruin {

namespace {

constexpr double kZ95 = 1.959963984540054;
// exp(-x) is exactly 0 in double precision beyond this.
constexpr double kExpUnderflow = 746.0;

// Per-path stream: the generator state is a pure function of (seed, index).
class PathRng {
public:
    PathRng(std::uint64_t seed, std::uint64_t index) : engine_(seed, index) {}

    double gauss() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }

private:
    detail::Xoshiro256pp engine_;
    boost::random::normal_distribution<double> normal_;
    boost::random::uniform_01<double> uniform_;
};

// 1 - (1 - pa)(1 - pb) for Brownian-bridge crossings with exponents ea, eb.
inline double crossing_probability(double ea, double eb)
{
    const double pa = ea < kExpUnderflow ? std::exp(-ea) : 0.0;
    const double pb = eb < kExpUnderflow ? std::exp(-eb) : 0.0;
    return pa + pb - pa * pb;
}

// Precomputed constants for stepping the two-dimensional system.
class XYStepper {
public:
    XYStepper(const ModelParams& p, const SimConfig& c)
        : params_(p),
          dt_(c.dt),
          sqrt_dt_(std::sqrt(c.dt)),
          rho_(p.rho),
          rho_perp_(std::sqrt(std::max(0.0, 1 - p.rho * p.rho))),
          bridge_(c.bridge_correction),
          bridge_x_(2 / (p.sigma1 * p.sigma1 * c.dt)),
          bridge_y_(2 / (p.sigma2 * p.sigma2 * c.dt))
    {
    }

    bool needs_second_normal() const { return rho_perp_ != 0; }

    template <class Uniform>
    void advance(PathState& s, const Policy& policy, double g1, double g2, Uniform&& uniform) const
    {
        const double u = policy_drift(policy, {s.x, s.y}, params_);
        const double dw1 = sqrt_dt_ * g1;
        const double dw2 = sqrt_dt_ * g2;
        const double dwhat = rho_ * dw1 + rho_perp_ * dw2;
        const double x1 = s.x + u * dt_ + params_.sigma1 * dw1;
        const double y1 = s.y + (params_.mu_bar - u) * dt_ + params_.sigma2 * dwhat;

        bool ruined = x1 <= 0 || y1 <= 0;
        if (!ruined && bridge_) {
            const double ex = bridge_x_ * s.x * x1;
            const double ey = bridge_y_ * s.y * y1;
            if (ex < kExpUnderflow || ey < kExpUnderflow) ruined = uniform() < crossing_probability(ex, ey);
        }
        s.t += dt_;
        s.x = x1;
        s.y = y1;
        s.w1 += dw1;
        s.w2 += dw2;
        if (ruined) {
            s.ruined = true;
            s.ruin_time = s.t;
        }
    }

private:
    ModelParams params_;
    double dt_;
    double sqrt_dt_;
    double rho_;
    double rho_perp_;
    bool bridge_;
    double bridge_x_;
    double bridge_y_;
};

unsigned resolve_threads(unsigned requested)
{
    if (requested != 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

// Runs `survives(rng, negate)` for every path and returns the survivor count.
// Paths are split into contiguous blocks; counts are integers, so the sum
// does not depend on the partition.
template <class PathFn>
std::int64_t count_survivors(const SimConfig& config, PathFn&& survives)
{
    const std::int64_t n = config.n_paths;
    auto run_block = [&](std::int64_t begin, std::int64_t end) {
        std::int64_t alive = 0;
        for (std::int64_t i = begin; i < end; ++i) {
            const bool paired = config.antithetic;
            const auto stream = static_cast<std::uint64_t>(paired ? i / 2 : i);
            PathRng rng(config.seed, stream);
            alive += survives(rng, paired && (i % 2 == 1)) ? 1 : 0;
        }
        return alive;
    };

    const auto workers = static_cast<std::int64_t>(std::min<std::int64_t>(resolve_threads(config.threads), n));
    if (workers <= 1) return run_block(0, n);

    std::vector<std::int64_t> partial(static_cast<std::size_t>(workers), 0);
    {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (std::int64_t w = 0; w < workers; ++w) {
            const std::int64_t begin = n * w / workers;
            const std::int64_t end = n * (w + 1) / workers;
            pool.emplace_back([&, w, begin, end] { partial[static_cast<std::size_t>(w)] = run_block(begin, end); });
        }
    }
    std::int64_t total = 0;
    for (auto v : partial) total += v;
    return total;
}

std::string bias_note(const SimConfig& config, double level)
{
    std::ostringstream os;
    os.precision(6);
    os << "p_hat estimates P[tau > T] with T = " << config.horizon
       << ", an upper bound on P[tau = inf]";
    if (std::isfinite(level))
        os << "; paths reaching min(x/sigma1, y/sigma2) >= " << level << " count as survivors (residual ruin < "
           << config.absorb_tolerance << ")";
    return os.str();
}

inline double sign_of(double z) { return z > 0 ? 1.0 : (z < 0 ? -1.0 : 0.0); }

}  // namespace

SimConfig SimConfig::defaults_for(const ModelParams& params)
{
    SimConfig c;
    c.horizon = 50.0 / params.mu_bar;
    return c;
}

void validate(const SimConfig& c)
{
    if (!(c.dt > 0) || !std::isfinite(c.dt)) throw std::invalid_argument("SimConfig: dt must be positive");
    if (!(c.horizon > 0) || !std::isfinite(c.horizon))
        throw std::invalid_argument("SimConfig: horizon must be positive");
    if (c.dt > c.horizon) throw std::invalid_argument("SimConfig: dt must not exceed the horizon");
    if (c.n_paths < 1) throw std::invalid_argument("SimConfig: n_paths must be at least 1");
    if (!(c.absorb_tolerance >= 0) || c.absorb_tolerance >= 1)
        throw std::invalid_argument("SimConfig: absorb_tolerance must lie in [0, 1)");
}

std::int64_t step_count(const SimConfig& c)
{
    const double ratio = c.horizon / c.dt;
    const double nearest = std::round(ratio);
    if (std::abs(ratio - nearest) <= 1e-9 * nearest) return static_cast<std::int64_t>(nearest);
    return static_cast<std::int64_t>(std::ceil(ratio));
}

PathState step_xy(const PathState& state, const Policy& policy, const ModelParams& params, const SimConfig& config,
                  const StepNoise& noise)
{
    if (state.ruined) return state;
    PathState next = state;
    XYStepper(params, config).advance(next, policy, noise.g1, noise.g2, [&] { return noise.u; });
    return next;
}

Estimate make_estimate(std::int64_t survivors, std::int64_t n_paths, std::string note)
{
    Estimate e;
    e.n_paths = n_paths;
    e.survivors = survivors;
    e.p_hat = static_cast<double>(survivors) / static_cast<double>(n_paths);
    e.std_err = std::sqrt(e.p_hat * (1 - e.p_hat) / static_cast<double>(n_paths));
    e.ci_low = std::max(0.0, e.p_hat - kZ95 * e.std_err);
    e.ci_high = std::min(1.0, e.p_hat + kZ95 * e.std_err);
    e.horizon_bias_note = std::move(note);
    return e;
}

double absorb_level(const Policy& policy, const ModelParams& p, double tolerance)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (!(tolerance > 0)) return inf;
    double kappa = 0;
    switch (policy.kind) {
    case Policy::Kind::PushBottom:
        kappa = std::min({p.mu_bar / (p.sigma1 + p.sigma2), (p.mu_bar + p.delta * p.sigma2) / p.sigma1,
                          (p.mu_bar + p.delta * p.sigma1) / p.sigma2});
        break;
    case Policy::Kind::NoCollaboration:
        kappa = std::min(p.mu1 / p.sigma1, p.mu2 / p.sigma2);
        break;
    case Policy::Kind::Constant: {
        const double u = policy_drift(policy, {}, p);
        kappa = std::min(u / p.sigma1, (p.mu_bar - u) / p.sigma2);
        break;
    }
    }
    if (!(kappa > 0)) return inf;
    return std::log(1 / tolerance) / (2 * kappa);
}

Estimate estimate_ruin(double x, double y, const Policy& policy, const ModelParams& params, const SimConfig& config)
{
    validate(params, ModelKind::Extended);
    validate(config);
    if (std::isnan(x) || std::isnan(y)) throw std::domain_error("estimate_ruin: NaN endowment");

    const XYStepper stepper(params, config);
    const std::int64_t steps = step_count(config);
    const double level = absorb_level(policy, params, config.absorb_tolerance);
    const bool two_normals = stepper.needs_second_normal();
    const double inv_s1 = 1 / params.sigma1;
    const double inv_s2 = 1 / params.sigma2;

    auto survives = [&](PathRng& rng, bool negate) {
        if (x <= 0 || y <= 0) return false;
        PathState s = PathState::start(x, y);
        const double sign = negate ? -1.0 : 1.0;
        auto uniform = [&rng] { return rng.uniform(); };
        for (std::int64_t k = 0; k < steps; ++k) {
            const double g1 = sign * rng.gauss();
            const double g2 = two_normals ? sign * rng.gauss() : 0.0;
            stepper.advance(s, policy, g1, g2, uniform);
            if (s.ruined) return false;
            if (std::min(s.x * inv_s1, s.y * inv_s2) >= level) return true;
        }
        return true;
    };
    const std::int64_t alive = count_survivors(config, survives);
    return make_estimate(alive, config.n_paths, bias_note(config, level));
}

double sign_sde_step(double z, const ModelParams& params, double dt, double g)
{
    const double drift = params.mu_bar + 2 * params.delta;
    const double diffusion = std::sqrt(std::max(0.0, 2 * (1 - params.rho)));
    return z - drift * sign_of(z) * dt + diffusion * std::sqrt(dt) * g;
}

std::vector<double> simulate_sign_sde(double z0, const ModelParams& params, const SimConfig& config)
{
    validate(config);
    if (params.rho < -1 || params.rho > 1) throw ParamError("rho_range", "simulate_sign_sde: |rho| must be <= 1");
    const std::int64_t steps = step_count(config);
    std::vector<double> path;
    path.reserve(static_cast<std::size_t>(steps) + 1);
    path.push_back(z0);
    PathRng rng(config.seed, 0);
    const bool noisy = params.rho != 1.0;
    double z = z0;
    for (std::int64_t k = 0; k < steps; ++k) {
        z = sign_sde_step(z, params, config.dt, noisy ? rng.gauss() : 0.0);
        path.push_back(z);
    }
    return path;
}

Estimate estimate_ruin_reflected(double x, double y, const ModelParams& params, const SimConfig& config)
{
    validate(params, ModelKind::Base);
    if (params.rho != -1.0) throw ParamError("rho_minus_one", "reflected formulation requires rho = -1");
    validate(config);
    if (std::isnan(x) || std::isnan(y) || x < 0 || y < 0)
        throw std::domain_error("estimate_ruin_reflected: endowments must be non-negative");

    const std::int64_t steps = step_count(config);
    const double dt = config.dt;
    const double level = absorb_level(Policy::push_bottom(), params, config.absorb_tolerance);
    // Diffusion of Z is sqrt(2(1 - rho)) = 2, so sigma^2 dt = 4 dt.
    const double bridge_scale = 2 / (4 * dt);

    auto survives = [&](PathRng& rng, bool negate) {
        double z = y - x;
        double barrier = x + y;
        if (std::abs(z) >= barrier) return false;
        const double sign = negate ? -1.0 : 1.0;
        for (std::int64_t k = 0; k < steps; ++k) {
            const double z1 = sign_sde_step(z, params, dt, sign * rng.gauss());
            const double barrier1 = barrier + params.mu_bar * dt;
            if (std::abs(z1) >= barrier1) return false;
            if (config.bridge_correction) {
                const double eu = bridge_scale * (barrier - z) * (barrier1 - z1);
                const double el = bridge_scale * (barrier + z) * (barrier1 + z1);
                if ((eu < kExpUnderflow || el < kExpUnderflow) && rng.uniform() < crossing_probability(eu, el))
                    return false;
            }
            z = z1;
            barrier = barrier1;
            // (barrier - |z|) / 2 is the smaller endowment.
            if ((barrier - std::abs(z)) / 2 >= level) return true;
        }
        return true;
    };
    const std::int64_t alive = count_survivors(config, survives);
    return make_estimate(alive, config.n_paths, bias_note(config, level));
}

}  // namespace ruin
