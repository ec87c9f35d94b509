#pragma once

#include <string>
#include <string_view>

namespace ccdr {

enum class PenaltyFamily { mcp, l1 };

std::string_view to_string(PenaltyFamily family);
/// Accepts "mcp" and "l1" (case-insensitive).
PenaltyFamily parse_penalty_family(std::string_view name);

/// Penalty family with regularization lambda >= 0 and, for MCP, concavity
/// gamma > 1 (gamma is ignored for L1).
struct PenaltyConfig {
    PenaltyFamily family = PenaltyFamily::mcp;
    double lambda = 0.0;
    double gamma = 2.0;

    static PenaltyConfig mcp(double lambda, double gamma) { return {PenaltyFamily::mcp, lambda, gamma}; }
    static PenaltyConfig l1(double lambda) { return {PenaltyFamily::l1, lambda, 2.0}; }

    PenaltyConfig with_lambda(double value) const
    {
        PenaltyConfig copy = *this;
        copy.lambda = value;
        return copy;
    }

    /// Throws std::invalid_argument on lambda < 0 or MCP gamma <= 1.
    void validate() const;
};

/// p_lambda(t) for t >= 0. MCP: lambda (t - t^2 / (2 lambda gamma)) below
/// lambda*gamma and lambda^2 gamma / 2 beyond; L1: lambda t.
double penalty_value(double t, const PenaltyConfig& cfg);

/// sup_t p_lambda(t): lambda^2 gamma / 2 for MCP, +infinity for L1.
double tau(const PenaltyConfig& cfg);

/// Global minimizer of (beta - btilde)^2 / 2 + p_lambda(|beta|): the firm
/// threshold for MCP, the soft threshold for L1. lambda = 0 is the identity.
double threshold(double btilde, const PenaltyConfig& cfg);

} // namespace ccdr
