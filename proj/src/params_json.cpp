#include "ruin/params_json.hpp"

#include <array>
#include <fstream>
#include <stdexcept>
#include <string_view>

namespace ruin {

namespace {

using Field = std::optional<double> ParamOverrides::*;

constexpr std::array<std::pair<std::string_view, Field>, 7> kFields{{
    {"mu1", &ParamOverrides::mu1},
    {"mu2", &ParamOverrides::mu2},
    {"mu_bar", &ParamOverrides::mu_bar},
    {"sigma1", &ParamOverrides::sigma1},
    {"sigma2", &ParamOverrides::sigma2},
    {"rho", &ParamOverrides::rho},
    {"delta", &ParamOverrides::delta},
}};

}  // namespace

void ParamOverrides::merge(const ParamOverrides& other)
{
    for (const auto& [name, field] : kFields)
        if (other.*field) this->*field = other.*field;
}

ParamOverrides overrides_from_json(const nlohmann::json& j)
{
    if (!j.is_object()) throw std::invalid_argument("parameters must be a JSON object");
    ParamOverrides o;
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const auto& [name, field] : kFields) {
            if (key != name) continue;
            if (!value.is_number()) throw std::invalid_argument("parameter '" + key + "' must be a number");
            o.*field = value.get<double>();
            known = true;
        }
        if (!known) throw std::invalid_argument("unknown parameter '" + key + "'");
    }
    return o;
}

ModelParams resolve(const ParamOverrides& o)
{
    ModelParams p;
    if (o.mu_bar) {
        p.mu_bar = *o.mu_bar;
    } else if (o.mu1 && o.mu2) {
        p.mu_bar = *o.mu1 + *o.mu2;
    } else {
        p.mu_bar = 1.0;
    }
    if (o.mu1 && o.mu2) {
        p.mu1 = *o.mu1;
        p.mu2 = *o.mu2;
    } else if (o.mu1) {
        p.mu1 = *o.mu1;
        p.mu2 = p.mu_bar - p.mu1;
    } else if (o.mu2) {
        p.mu2 = *o.mu2;
        p.mu1 = p.mu_bar - p.mu2;
    } else {
        p.mu1 = p.mu2 = p.mu_bar / 2;
    }
    p.sigma1 = o.sigma1.value_or(1.0);
    p.sigma2 = o.sigma2.value_or(1.0);
    p.rho = o.rho.value_or(0.0);
    p.delta = o.delta.value_or(0.0);
    return p;
}

nlohmann::ordered_json to_json(const ModelParams& p)
{
    return {{"mu1", p.mu1},       {"mu2", p.mu2}, {"mu_bar", p.mu_bar}, {"sigma1", p.sigma1},
            {"sigma2", p.sigma2}, {"rho", p.rho}, {"delta", p.delta}};
}

ModelParams params_from_json(const nlohmann::json& j)
{
    const auto o = overrides_from_json(j);
    for (const auto& [name, field] : kFields)
        if (!(o.*field)) throw std::invalid_argument("missing parameter '" + std::string(name) + "'");
    return resolve(o);
}

ParamOverrides load_overrides(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open parameter file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("malformed parameter file '" + path + "': " + e.what());
    }
    return overrides_from_json(j);
}

}  // namespace ruin
