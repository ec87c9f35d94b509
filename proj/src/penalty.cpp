#include <ccdr/penalty.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ccdr {

std::string_view to_string(PenaltyFamily family)
{
    switch (family) {
    case PenaltyFamily::mcp: return "mcp";
    case PenaltyFamily::l1: return "l1";
    }
    return "unknown";
}

PenaltyFamily parse_penalty_family(std::string_view name)
{
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "mcp")
        return PenaltyFamily::mcp;
    if (lower == "l1" || lower == "lasso")
        return PenaltyFamily::l1;
    throw std::invalid_argument("unknown penalty family '" + std::string(name) + "'");
}

void PenaltyConfig::validate() const
{
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("penalty lambda must be a finite value >= 0");
    if (family == PenaltyFamily::mcp && !(gamma > 1.0))
        throw std::invalid_argument("MCP concavity gamma must be > 1");
}

double penalty_value(double t, const PenaltyConfig& cfg)
{
    if (t < 0.0)
        throw std::invalid_argument("penalty_value: t must be nonnegative");
    const double lambda = cfg.lambda;
    if (cfg.family == PenaltyFamily::l1)
        return lambda * t;
    const double knot = lambda * cfg.gamma;
    if (t < knot)
        return lambda * (t - t * t / (2.0 * knot));
    return 0.5 * lambda * lambda * cfg.gamma;
}

double tau(const PenaltyConfig& cfg)
{
    if (cfg.family == PenaltyFamily::l1)
        return std::numeric_limits<double>::infinity();
    return 0.5 * cfg.lambda * cfg.lambda * cfg.gamma;
}

double threshold(double btilde, const PenaltyConfig& cfg)
{
    cfg.validate();
    const double lambda = cfg.lambda;
    const double magnitude = std::abs(btilde);
    if (magnitude <= lambda)
        return 0.0;
    const double sign = btilde < 0.0 ? -1.0 : 1.0;
    if (cfg.family == PenaltyFamily::l1)
        return sign * (magnitude - lambda);
    if (magnitude > lambda * cfg.gamma)
        return btilde;
    return sign * (magnitude - lambda) / (1.0 - 1.0 / cfg.gamma);
}

} // namespace ccdr
