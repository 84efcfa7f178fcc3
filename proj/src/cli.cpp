#include "ruin/cli.hpp"

#include "ruin/closed_forms.hpp"
#include "ruin/params_json.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

namespace ruin::cli {

namespace {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Unsupported : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ModelFlags {
    std::string params_file;
    ParamOverrides flags;
};

struct SimFlags {
    double dt = 1e-3;
    std::optional<double> horizon;
    std::int64_t paths = 10000;
    std::uint64_t seed = 42;
    bool bridge = true;
    bool antithetic = false;
    unsigned threads = 0;
};

void add_model_flags(CLI::App* app, ModelFlags& m)
{
    app->add_option("--params", m.params_file, "JSON parameter file (flags override its fields)");
    app->add_option("--mu1", m.flags.mu1, "drift rate of firm 1");
    app->add_option("--mu2", m.flags.mu2, "drift rate of firm 2");
    app->add_option("--mu-bar", m.flags.mu_bar, "total drift mu1 + mu2");
    app->add_option("--sigma1", m.flags.sigma1, "diffusion coefficient of firm 1");
    app->add_option("--sigma2", m.flags.sigma2, "diffusion coefficient of firm 2");
    app->add_option("--rho", m.flags.rho, "correlation of the Brownian motions");
    app->add_option("--delta", m.flags.delta, "transfer bound parameter");
}

void add_sim_flags(CLI::App* app, SimFlags& s)
{
    app->add_option("--dt", s.dt, "Euler time step")->capture_default_str();
    app->add_option("--horizon", s.horizon, "truncation time T (default 50/mu_bar)");
    app->add_option("--paths", s.paths, "number of paths")->capture_default_str();
    app->add_option("--seed", s.seed, "RNG seed")->capture_default_str();
    app->add_flag("--bridge,!--no-bridge", s.bridge, "Brownian-bridge crossing correction (default on)");
    app->add_flag("--antithetic", s.antithetic, "antithetic variates");
    app->add_option("--threads", s.threads, "worker threads (0 = all cores); results do not depend on it");
}

ModelParams load_params(const ModelFlags& m)
{
    ParamOverrides o;
    if (!m.params_file.empty()) {
        std::ifstream probe(m.params_file);
        if (!probe) throw IoError("cannot open parameter file '" + m.params_file + "'");
        o = load_overrides(m.params_file);
    }
    o.merge(m.flags);
    ModelParams p = resolve(o);
    validate(p, ModelKind::Extended);
    return p;
}

SimConfig make_config(const SimFlags& s, const ModelParams& p)
{
    SimConfig c = SimConfig::defaults_for(p);
    c.dt = s.dt;
    if (s.horizon) c.horizon = *s.horizon;
    c.n_paths = s.paths;
    c.seed = s.seed;
    c.bridge_correction = s.bridge;
    c.antithetic = s.antithetic;
    c.threads = s.threads;
    validate(c);
    return c;
}

std::vector<double> linspace(double lo, double hi, int n)
{
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return v;
}

// Simulated estimate of `quantity`; gain uses common random numbers.
double simulate_quantity(Quantity q, double x, double y, const ModelParams& p, const SimConfig& c)
{
    switch (q) {
    case Quantity::Value:
        return estimate_ruin(x, y, Policy::push_bottom(), p, c).p_hat;
    case Quantity::Survival:
        return estimate_ruin(x, y, Policy::no_collaboration(), p, c).p_hat;
    case Quantity::Gain:
        return estimate_ruin(x, y, Policy::push_bottom(), p, c).p_hat
               - estimate_ruin(x, y, Policy::no_collaboration(), p, c).p_hat;
    }
    return 0;
}

ValueFunction require_closed_form(Quantity q, const ModelParams& p)
{
    auto f = closed_form(q, p);
    if (!f) {
        std::ostringstream os;
        os << "no closed form for quantity '" << to_string(q) << "' at rho=" << p.rho << ", delta=" << p.delta
           << ", mu_bar=" << p.mu_bar << ", sigma1=" << p.sigma1 << ", sigma2=" << p.sigma2;
        throw Unsupported(os.str());
    }
    return *f;
}

int cmd_eval(const ModelFlags& m, const SimFlags& s, double x, double y, const std::string& quantity_text,
             bool simulate, std::ostream& out, std::ostream& err)
{
    const Quantity q = parse_quantity(quantity_text);
    const ModelParams p = load_params(m);
    if (std::isnan(x) || std::isnan(y) || x < 0 || y < 0)
        throw std::invalid_argument("endowments must be non-negative");
    if (x == 0 || y == 0) {
        out << format_human(0.0) << '\n';
        return kOk;
    }
    auto f = closed_form(q, p);
    if (simulate || !f) {
        if (!simulate) throw Unsupported("no closed form for this quantity and parameter regime; pass --simulate");
        const SimConfig c = make_config(s, p);
        err << "note: " << to_string(q) << " estimated by simulation (" << c.n_paths << " paths, dt=" << c.dt
            << ", horizon=" << c.horizon << ")\n";
        out << format_human(simulate_quantity(q, x, y, p, c)) << '\n';
        return kOk;
    }
    out << format_human((*f)(x, y)) << '\n';
    return kOk;
}

int cmd_grid(const ModelFlags& m, const GridSpec& grid, const std::string& quantity_text, const std::string& path,
             std::ostream& out)
{
    const Quantity q = parse_quantity(quantity_text);
    validate(grid);
    const ModelParams p = load_params(m);
    const auto f = require_closed_form(q, p);
    const std::string csv = grid_csv(f, grid);
    if (path.empty() || path == "-") {
        out << csv;
    } else {
        write_atomically(path, csv);
    }
    return kOk;
}

int cmd_simulate(const ModelFlags& m, const SimFlags& s, double x, double y, const std::string& policy_text,
                 bool reflected, std::ostream& out)
{
    const ModelParams p = load_params(m);
    const SimConfig c = make_config(s, p);
    if (std::isnan(x) || std::isnan(y) || x < 0 || y < 0)
        throw std::invalid_argument("endowments must be non-negative");
    Estimate e;
    if (reflected) {
        if (parse_policy(policy_text).kind != Policy::Kind::PushBottom)
            throw std::invalid_argument("--reflected simulates the push-bottom policy only");
        e = estimate_ruin_reflected(x, y, p, c);
    } else {
        e = estimate_ruin(x, y, parse_policy(policy_text), p, c);
    }
    out << estimate_json(e, c) << '\n';
    return kOk;
}

int cmd_gain(const ModelFlags& m, const SimFlags& s, std::optional<double> x, std::optional<double> y,
             const GridSpec& grid, const std::string& path, bool simulate, std::ostream& out, std::ostream& err)
{
    if (x.has_value() != y.has_value()) throw std::invalid_argument("gain: pass both --x and --y, or neither");
    if (x) return cmd_eval(m, s, *x, *y, "gain", simulate, out, err);

    validate(grid);
    const ModelParams p = load_params(m);
    const auto f = require_closed_form(Quantity::Gain, p);
    double lo = INFINITY, hi = -INFINITY;
    State arg_lo, arg_hi;
    std::int64_t negative = 0, points = 0;
    for (double gx : linspace(grid.x_min, grid.x_max, grid.nx)) {
        for (double gy : linspace(grid.y_min, grid.y_max, grid.ny)) {
            const double g = f(gx, gy);
            ++points;
            if (g < 0) ++negative;
            if (g < lo) lo = g, arg_lo = {gx, gy};
            if (g > hi) hi = g, arg_hi = {gx, gy};
        }
    }
    if (!path.empty()) write_atomically(path, grid_csv(f, grid));
    nlohmann::ordered_json j;
    j["min_gain"] = lo;
    j["argmin"] = {arg_lo.x, arg_lo.y};
    j["max_gain"] = hi;
    j["argmax"] = {arg_hi.x, arg_hi.y};
    j["negative_points"] = negative;
    j["points"] = points;
    out << j.dump() << '\n';
    return kOk;
}

struct CheckRow {
    std::string suite;
    double x = 0;
    double y = 0;
    std::string metric;
    double value = 0;
    double threshold = 0;
    bool pass = false;
};

int cmd_check(const ModelFlags& m, const SimFlags& s, const std::string& suite, double perturb, std::ostream& out)
{
    const ModelParams p = load_params(m);
    ValueFunction base = require_closed_form(Quantity::Value, p);
    ValueFunction V = perturb == 0 ? base : ValueFunction([base, perturb](double x, double y) {
        return base(x, y) + perturb * x;
    });

    std::vector<CheckRow> rows;
    if (suite == "hjb") {
        const auto scan = hjb_scan(V, p);
        const ScanSpec spec;
        for (const auto& r : scan.rows) {
            if (std::abs(r.residual) < 1e-4) {
                rows.push_back({"hjb", r.point.x, r.point.y, "residual:" + to_string(r.branch), r.residual, 1e-4, true});
                continue;
            }
            const auto rc = richardson(V, r.point, p, spec.h, 1e-4);
            rows.push_back({"hjb", r.point.x, r.point.y, "residual_extrapolated:" + to_string(r.branch),
                            rc.extrapolated, 1e-4, rc.consistent});
        }
        if (p.rho == 1.0) {
            for (const auto& g : gap_scan(V, p)) {
                if (!g.resolved) continue;
                rows.push_back({"hjb", g.point.x, g.point.y, g.above ? "gap_positive" : "gap_negative", g.gap, 0,
                                g.sign_ok});
            }
        }
    } else if (suite == "boundary") {
        std::vector<double> grid;
        for (int i = 1; i <= 20; ++i) grid.push_back(0.25 * i);
        for (const auto& r : boundary_check(V, p, grid).rows) {
            const bool exact = r.kind == BoundaryRow::Kind::ZeroX || r.kind == BoundaryRow::Kind::ZeroY;
            rows.push_back({"boundary", r.point.x, r.point.y, to_string(r.kind), r.value - r.expected,
                            exact ? 0.0 : 1e-6, r.pass});
        }
    } else if (suite == "mc-crosscheck") {
        const SimConfig c = make_config(s, p);
        for (State pt : {State{1, 1}, State{1, 2}, State{2, 1}}) {
            const Estimate e = estimate_ruin(pt.x, pt.y, Policy::push_bottom(), p, c);
            const double tol = 3 * e.std_err + 0.005;
            const double dev = e.p_hat - V(pt.x, pt.y);
            rows.push_back({"mc-crosscheck", pt.x, pt.y, "p_hat-closed_form", dev, tol, std::abs(dev) <= tol});
        }
    } else {
        throw std::invalid_argument("unknown suite '" + suite + "' (expected hjb, boundary or mc-crosscheck)");
    }

    std::size_t failed = 0;
    for (const auto& r : rows) failed += r.pass ? 0 : 1;
    if (failed > 0) {
        out << "suite,x,y,metric,value,threshold,status\n";
        for (const auto& r : rows) {
            if (r.pass) continue;
            out << r.suite << ',' << format_csv(r.x) << ',' << format_csv(r.y) << ',' << r.metric << ','
                << format_csv(r.value) << ',' << format_csv(r.threshold) << ",FAIL\n";
        }
    }
    out << "# " << suite << ": " << rows.size() - failed << "/" << rows.size() << " assertions passed -> "
        << (failed == 0 ? "PASS" : "FAIL") << '\n';
    return failed == 0 ? kOk : kCheckFailed;
}

}  // namespace

Quantity parse_quantity(const std::string& text)
{
    if (text == "value") return Quantity::Value;
    if (text == "survival") return Quantity::Survival;
    if (text == "gain") return Quantity::Gain;
    throw Unsupported("unknown quantity '" + text + "' (expected value, survival or gain)");
}

std::string to_string(Quantity q)
{
    switch (q) {
    case Quantity::Value:
        return "value";
    case Quantity::Survival:
        return "survival";
    case Quantity::Gain:
        return "gain";
    }
    return "unknown";
}

void validate(const GridSpec& g)
{
    for (double v : {g.x_min, g.x_max, g.y_min, g.y_max})
        if (!std::isfinite(v)) throw std::invalid_argument("grid bounds must be finite");
    if (g.x_min < 0 || g.y_min < 0) throw std::invalid_argument("grid bounds must be non-negative");
    if (!(g.x_max > g.x_min) || !(g.y_max > g.y_min)) throw std::invalid_argument("grid max must exceed grid min");
    if (g.nx < 2 || g.ny < 2) throw std::invalid_argument("grid resolution must be at least 2");
}

std::optional<ValueFunction> closed_form(Quantity q, const ModelParams& p)
{
    validate(p, ModelKind::Extended);
    if (p.rho == 1.0) {
        switch (q) {
        case Quantity::Value:
            return ValueFunction([p](double x, double y) { return value_rho1_extended(x, y, p); });
        case Quantity::Survival:
            survival_no_collab(1, 1, p);  // surfaces ParamError for non-positive drifts
            return ValueFunction([p](double x, double y) { return survival_no_collab(x, y, p); });
        case Quantity::Gain:
            survival_no_collab(1, 1, p);
            return ValueFunction([p](double x, double y) { return gain_of_collaboration(x, y, p); });
        }
    }
    const bool mckean_shepp = p.rho == 0.0 && p.delta == 0.0 && p.mu_bar == 1.0 && p.sigma1 == 1.0
                              && p.sigma2 == 1.0;
    if (q == Quantity::Value && mckean_shepp) return ValueFunction(value_mckean_shepp);
    return std::nullopt;
}

std::string format_human(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v == 0 ? 0.0 : v);
    return buf;
}

std::string format_csv(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v == 0 ? 0.0 : v);
    return buf;
}

std::string grid_csv(const ValueFunction& f, const GridSpec& g)
{
    validate(g);
    std::string csv = "x,y,value\n";
    const auto xs = linspace(g.x_min, g.x_max, g.nx);
    const auto ys = linspace(g.y_min, g.y_max, g.ny);
    for (double x : xs) {
        for (double y : ys) {
            csv += format_csv(x);
            csv += ',';
            csv += format_csv(y);
            csv += ',';
            csv += format_csv(f(x, y));
            csv += '\n';
        }
    }
    return csv;
}

std::string estimate_json(const Estimate& e, const SimConfig& c)
{
    nlohmann::ordered_json j;
    j["p_hat"] = e.p_hat;
    j["std_err"] = e.std_err;
    j["ci_low"] = e.ci_low;
    j["ci_high"] = e.ci_high;
    j["n_paths"] = e.n_paths;
    j["seed"] = c.seed;
    j["horizon"] = c.horizon;
    j["dt"] = c.dt;
    j["note"] = e.horizon_bias_note;
    return j.dump();
}

void write_atomically(const std::string& path, const std::string& content)
{
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw IoError("cannot open '" + tmp.string() + "' for writing");
        os.write(content.data(), static_cast<std::streamsize>(content.size()));
        os.flush();
        if (!os) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        std::error_code ignore;
        fs::remove(tmp, ignore);
        throw IoError("cannot move output into '" + path + "': " + ec.message());
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Optimal collaboration of two firms against ruin: closed forms, simulation and checks", "ruin"};
    app.require_subcommand(1);

    ModelFlags model;
    SimFlags sim;
    GridSpec grid;
    double x = 0, y = 0;
    std::optional<double> gx, gy;
    std::string quantity = "value";
    std::string policy = "push-bottom";
    std::string out_path;
    std::string suite;
    bool simulate = false;
    bool reflected = false;
    double perturb = 0;

    auto add_grid_flags = [&](CLI::App* sub) {
        sub->add_option("--x-min", grid.x_min)->capture_default_str();
        sub->add_option("--x-max", grid.x_max)->capture_default_str();
        sub->add_option("--y-min", grid.y_min)->capture_default_str();
        sub->add_option("--y-max", grid.y_max)->capture_default_str();
        sub->add_option("--nx", grid.nx)->capture_default_str();
        sub->add_option("--ny", grid.ny)->capture_default_str();
    };

    auto* eval = app.add_subcommand("eval", "evaluate a quantity at one point");
    add_model_flags(eval, model);
    add_sim_flags(eval, sim);
    eval->add_option("--x", x, "endowment of firm 1")->required();
    eval->add_option("--y", y, "endowment of firm 2")->required();
    eval->add_option("--quantity", quantity, "value | survival | gain")->capture_default_str();
    eval->add_flag("--simulate", simulate, "estimate by Monte Carlo instead of a closed form");

    auto* grid_cmd = app.add_subcommand("grid", "export a quantity on a grid as CSV (x,y,value)");
    add_model_flags(grid_cmd, model);
    add_grid_flags(grid_cmd);
    grid_cmd->add_option("--quantity", quantity, "value | survival | gain")->capture_default_str();
    grid_cmd->add_option("--out", out_path, "output CSV path (default stdout)");

    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo survival estimate as JSON");
    add_model_flags(simulate_cmd, model);
    add_sim_flags(simulate_cmd, sim);
    simulate_cmd->add_option("--x", x, "endowment of firm 1")->required();
    simulate_cmd->add_option("--y", y, "endowment of firm 2")->required();
    simulate_cmd->add_option("--policy", policy, "push-bottom | none | constant:<u>")->capture_default_str();
    simulate_cmd->add_flag("--reflected", reflected, "rho = -1 one-dimensional formulation");

    auto* gain_cmd = app.add_subcommand("gain", "gain of collaboration at a point or summarised over a grid");
    add_model_flags(gain_cmd, model);
    add_sim_flags(gain_cmd, sim);
    add_grid_flags(gain_cmd);
    gain_cmd->add_option("--x", gx, "endowment of firm 1");
    gain_cmd->add_option("--y", gy, "endowment of firm 2");
    gain_cmd->add_option("--out", out_path, "also write the gain grid as CSV");
    gain_cmd->add_flag("--simulate", simulate, "estimate by Monte Carlo instead of a closed form");

    auto* check = app.add_subcommand("check", "run a verification suite against the closed-form value function");
    add_model_flags(check, model);
    add_sim_flags(check, sim);
    check->add_option("--suite", suite, "hjb | boundary | mc-crosscheck")->required();
    check->add_option("--perturb", perturb, "add perturb * x to the value function (negative control)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    }

    try {
        if (eval->parsed()) return cmd_eval(model, sim, x, y, quantity, simulate, out, err);
        if (grid_cmd->parsed()) return cmd_grid(model, grid, quantity, out_path, out);
        if (simulate_cmd->parsed()) return cmd_simulate(model, sim, x, y, policy, reflected, out);
        if (gain_cmd->parsed()) return cmd_gain(model, sim, gx, gy, grid, out_path, simulate, out, err);
        if (check->parsed()) return cmd_check(model, sim, suite, perturb, out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoFailure;
    } catch (const Unsupported& e) {
        err << "error: " << e.what() << '\n';
        return kUnsupported;
    } catch (const std::invalid_argument& e) {  // includes ParamError
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    }
    return kInvalidInput;
}

}  // namespace ruin::cli
