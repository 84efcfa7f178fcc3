#pragma once

#include "ruin/model.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace ruin {

// Partially specified parameters, as read from a JSON file or CLI flags.
struct ParamOverrides {
    std::optional<double> mu1, mu2, mu_bar, sigma1, sigma2, rho, delta;

    // Fields set in `other` replace ours.
    void merge(const ParamOverrides& other);
};

// Accepts an object whose keys are a subset of
// {mu1, mu2, mu_bar, sigma1, sigma2, rho, delta}, each a number.
// Throws std::invalid_argument on unknown keys or non-numeric values.
ParamOverrides overrides_from_json(const nlohmann::json& j);

// Fills gaps: mu_bar defaults to mu1 + mu2 (or 1), a single missing drift is
// mu_bar minus the other, and two missing drifts split mu_bar evenly.
// sigma1 = sigma2 = 1, rho = 0, delta = 0 otherwise. Does not validate.
ModelParams resolve(const ParamOverrides& o);

nlohmann::ordered_json to_json(const ModelParams& p);

// Full parameter object (all seven keys required).
ModelParams params_from_json(const nlohmann::json& j);

ParamOverrides load_overrides(const std::string& path);

}  // namespace ruin
