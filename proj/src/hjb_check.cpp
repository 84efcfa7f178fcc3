#include "ruin/hjb_check.hpp"

#include "ruin/closed_forms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ruin {

namespace {

void require_interior(State p, double h, const char* who)
{
    if (!(h > 0)) throw std::invalid_argument(std::string(who) + ": step must be positive");
    if (!(p.x > h) || !(p.y > h))
        throw std::invalid_argument(std::string(who) + ": stencil leaves the open quadrant");
}

std::vector<double> linspace(double lo, double hi, int n)
{
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    return out;
}

}  // namespace

double diagonal_distance(State p, const ModelParams& params)
{
    return std::abs(params.sigma1 * p.y - params.sigma2 * p.x) / std::hypot(params.sigma1, params.sigma2);
}

ResidualReport hjb_residual(const ValueFunction& V, State p, const ModelParams& params, double h)
{
    require_interior(p, h, "hjb_residual");
    if (diagonal_distance(p, params) < 10 * h)
        throw std::invalid_argument("hjb_residual: point lies within 10h of the switching line");

    const double x = p.x;
    const double y = p.y;
    const double c = V(x, y);
    const double xp = V(x + h, y);
    const double xm = V(x - h, y);
    const double yp = V(x, y + h);
    const double ym = V(x, y - h);
    const double pp = V(x + h, y + h);
    const double pm = V(x + h, y - h);
    const double mp = V(x - h, y + h);
    const double mm = V(x - h, y - h);

    const double vx = (xp - xm) / (2 * h);
    const double vy = (yp - ym) / (2 * h);
    const double vxx = (xp - 2 * c + xm) / (h * h);
    const double vyy = (yp - 2 * c + ym) / (h * h);
    const double vxy = (pp - pm - mp + mm) / (4 * h * h);

    const double s1 = params.sigma1;
    const double s2 = params.sigma2;
    auto hamiltonian = [&](double a) { return a * vx + (params.mu_bar - a) * vy; };
    const double h_hi = hamiltonian(params.drift_high());
    const double h_lo = hamiltonian(params.drift_low());

    ResidualReport r;
    r.point = p;
    r.h = h;
    r.v_x = vx;
    r.v_y = vy;
    r.branch = vx >= vy ? Branch::Vx : Branch::Vy;
    r.residual = 0.5 * s1 * s1 * vxx + 0.5 * s2 * s2 * vyy + params.rho * s1 * s2 * vxy + std::max(h_hi, h_lo);
    return r;
}

RichardsonCheck richardson(const ValueFunction& V, State p, const ModelParams& params, double h, double tol)
{
    RichardsonCheck r;
    r.r_h = hjb_residual(V, p, params, h).residual;
    r.r_half = hjb_residual(V, p, params, h / 2).residual;
    r.ratio = r.r_half != 0 ? r.r_h / r.r_half : INFINITY;
    r.extrapolated = (4 * r.r_half - r.r_h) / 3;
    const bool both_small = std::abs(r.r_h) < tol && std::abs(r.r_half) < tol;
    r.consistent = both_small || (r.ratio >= 3 && r.ratio <= 5 && std::abs(r.extrapolated) < tol);
    return r;
}

double derivative_gap(const ValueFunction& V, State p, const ModelParams&, double h)
{
    require_interior(p, h, "derivative_gap");
    const double vx = (V(p.x + h, p.y) - V(p.x - h, p.y)) / (2 * h);
    const double vy = (V(p.x, p.y + h) - V(p.x, p.y - h)) / (2 * h);
    return vx - vy;
}

ResidualScan hjb_scan(const ValueFunction& V, const ModelParams& params, const ScanSpec& spec)
{
    ResidualScan scan;
    const auto axis = linspace(spec.lo, spec.hi, spec.n);
    for (double x : axis) {
        for (double y : axis) {
            const State p{x, y};
            if (diagonal_distance(p, params) < 10 * spec.h) {
                ++scan.skipped;
                continue;
            }
            auto row = hjb_residual(V, p, params, spec.h);
            scan.max_abs_residual = std::max(scan.max_abs_residual, std::abs(row.residual));
            scan.rows.push_back(row);
        }
    }
    return scan;
}

std::vector<GapRow> gap_scan(const ValueFunction& V, const ModelParams& params, const ScanSpec& spec)
{
    std::vector<GapRow> rows;
    const auto axis = linspace(spec.lo, spec.hi, spec.n);
    for (double x : axis) {
        for (double y : axis) {
            const State p{x, y};
            if (diagonal_distance(p, params) < 10 * spec.h) continue;
            GapRow row;
            row.point = p;
            row.gap = derivative_gap(V, p, params, spec.h);
            const double mass = std::abs(V(x + spec.h, y)) + std::abs(V(x - spec.h, y))
                                + std::abs(V(x, y + spec.h)) + std::abs(V(x, y - spec.h));
            row.noise_floor = 8 * std::numeric_limits<double>::epsilon() * mass / (2 * spec.h);
            row.above = params.sigma1 * y > params.sigma2 * x;
            row.resolved = std::abs(row.gap) > row.noise_floor;
            row.sign_ok = row.above ? row.gap > 0 : row.gap < 0;
            rows.push_back(row);
        }
    }
    return rows;
}

BoundaryReport boundary_check(const ValueFunction& V, const ModelParams& params, const std::vector<double>& grid,
                              double tolerance)
{
    BoundaryReport report;
    const double big = 200.0 / params.mu_bar;
    auto add = [&](BoundaryRow::Kind kind, State p, double expected, bool exact) {
        BoundaryRow row;
        row.kind = kind;
        row.point = p;
        row.value = V(p.x, p.y);
        row.expected = expected;
        row.pass = exact ? row.value == expected : std::abs(row.value - expected) < tolerance;
        report.passed = report.passed && row.pass;
        report.rows.push_back(row);
    };
    for (double c : grid) {
        add(BoundaryRow::Kind::ZeroY, {c, 0.0}, 0.0, true);
        add(BoundaryRow::Kind::ZeroX, {0.0, c}, 0.0, true);
        add(BoundaryRow::Kind::AsymptoteX, {big, c}, boundary_asymptote(Axis::XToInfinity, c, params), false);
        add(BoundaryRow::Kind::AsymptoteY, {c, big}, boundary_asymptote(Axis::YToInfinity, c, params), false);
    }
    return report;
}

std::string to_string(Branch branch) { return branch == Branch::Vx ? "Vx" : "Vy"; }

std::string to_string(BoundaryRow::Kind kind)
{
    switch (kind) {
    case BoundaryRow::Kind::ZeroX:
        return "zero_x";
    case BoundaryRow::Kind::ZeroY:
        return "zero_y";
    case BoundaryRow::Kind::AsymptoteX:
        return "asymptote_x";
    case BoundaryRow::Kind::AsymptoteY:
        return "asymptote_y";
    }
    return "unknown";
}

}  // namespace ruin
