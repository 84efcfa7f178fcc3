#pragma once

#include "ruin/hjb_check.hpp"
#include "ruin/model.hpp"
#include "ruin/simulator.hpp"

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ruin::cli {

// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kCheckFailed = 1,
    kInvalidInput = 2,
    kUnsupported = 3,
    kIoFailure = 4,
};

enum class Quantity { Value, Survival, Gain };

Quantity parse_quantity(const std::string& text);
std::string to_string(Quantity q);

struct GridSpec {
    double x_min = 0;
    double x_max = 5;
    double y_min = 0;
    double y_max = 5;
    int nx = 51;
    int ny = 51;
};

// Throws std::invalid_argument.
void validate(const GridSpec& grid);

// Closed form for `quantity` under `params`, or nullopt when none exists for
// this parameter regime. Throws ParamError if the regime has a closed form
// but the parameters are invalid for it.
std::optional<ValueFunction> closed_form(Quantity quantity, const ModelParams& params);

// CSV body "x,y,value\n" + nx*ny rows, x outer, y inner, %.17g.
std::string grid_csv(const ValueFunction& f, const GridSpec& grid);

// Single-line JSON {p_hat, std_err, ci_low, ci_high, n_paths, seed, horizon, dt, note}.
std::string estimate_json(const Estimate& estimate, const SimConfig& config);

std::string format_human(double v);  // 10 significant digits
std::string format_csv(double v);    // 17 significant digits

// Writes to a temporary sibling and renames over `path`; no partial file is
// left behind on failure. Throws std::runtime_error.
void write_atomically(const std::string& path, const std::string& content);

// Entry point; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ruin::cli
