#pragma once

#include "ruin/model.hpp"

#include <functional>
#include <string>
#include <vector>

namespace ruin {

using ValueFunction = std::function<double(double x, double y)>;

// Which endpoint of the admissible drift interval maximises the Hamiltonian:
// Vx when V_x >= V_y (full drift to firm 1), Vy otherwise.
enum class Branch { Vx, Vy };

struct ResidualReport {
    State point;
    double residual = 0;
    double h = 0;
    Branch branch = Branch::Vx;
    double v_x = 0;
    double v_y = 0;
};

// Central-difference residual of
//   sigma1^2/2 V_xx + sigma2^2/2 V_yy + rho sigma1 sigma2 V_xy
//     + max_{a in [-delta sigma1, mu_bar + delta sigma2]} (a V_x + (mu_bar - a) V_y).
// The maximum is taken over the two endpoints. Throws std::invalid_argument
// unless x, y > h and the point is at least 10 h (Euclidean) from the line
// sigma1 y = sigma2 x.
ResidualReport hjb_residual(const ValueFunction& value, State point, const ModelParams& params, double h);

struct RichardsonCheck {
    double r_h = 0;
    double r_half = 0;
    double ratio = 0;         // r_h / r_half, about 4 when truncation dominates
    double extrapolated = 0;  // (4 r_half - r_h) / 3
    bool consistent = false;  // both below tol, or ratio in [3, 5] and |extrapolated| < tol
};

// Residual at h and h/2 at the same point.
RichardsonCheck richardson(const ValueFunction& value, State point, const ModelParams& params, double h, double tol);

// Central-difference V_x - V_y. Requires x, y > h.
double derivative_gap(const ValueFunction& value, State point, const ModelParams& params, double h);

// Euclidean distance from (x, y) to the switching line sigma1 y = sigma2 x.
double diagonal_distance(State point, const ModelParams& params);

struct ScanSpec {
    double lo = 0.2;
    double hi = 5.0;
    int n = 20;
    double h = 1e-3;
};

struct ResidualScan {
    std::vector<ResidualReport> rows;
    int skipped = 0;  // grid points dropped for being within 10 h of the diagonal
    double max_abs_residual = 0;
};

// Residuals on the n x n grid over [lo, hi]^2, excluding points near the diagonal.
ResidualScan hjb_scan(const ValueFunction& value, const ModelParams& params, const ScanSpec& spec = {});

struct GapRow {
    State point;
    double gap = 0;
    double noise_floor = 0;  // rounding bound of the central difference
    bool above = false;      // sigma1 y > sigma2 x
    bool resolved = false;   // |gap| > noise_floor
    bool sign_ok = false;
};

// derivative_gap on the same grid; sign_ok when the gap is positive strictly
// above the diagonal and negative strictly below. Far from the origin the
// true gap can be exponentially small (below 1e-16); such points are marked
// unresolved and are not sign-checked.
std::vector<GapRow> gap_scan(const ValueFunction& value, const ModelParams& params, const ScanSpec& spec = {});

struct BoundaryRow {
    enum class Kind { ZeroX, ZeroY, AsymptoteX, AsymptoteY };
    Kind kind = Kind::ZeroX;
    State point;
    double value = 0;
    double expected = 0;
    bool pass = false;
};

struct BoundaryReport {
    std::vector<BoundaryRow> rows;
    bool passed = true;
};

// For each coordinate c in `grid`: V(c, 0) and V(0, c) must be exactly 0;
// V(200/mu_bar, c) and V(c, 200/mu_bar) must lie within `tolerance` of the
// corresponding boundary asymptote.
BoundaryReport boundary_check(const ValueFunction& value, const ModelParams& params, const std::vector<double>& grid,
                              double tolerance = 1e-6);

std::string to_string(Branch branch);
std::string to_string(BoundaryRow::Kind kind);

}  // namespace ruin
