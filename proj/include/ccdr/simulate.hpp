#pragma once

#include <ccdr/model.hpp>

#include <cstdint>
#include <random>
#include <string_view>

namespace ccdr {

/// Pseudo-random engine used by the simulator. Named in run manifests.
using Rng = std::mt19937_64;
inline constexpr std::string_view kRngName = "mt19937_64";

/// Erdos-Renyi DAG plus Gaussian SEM sampling settings.
struct SimConfig {
    Index p = 10;
    /// Expected edge count s0; each of the C(p,2) forward pairs is kept with
    /// probability s0 / C(p,2).
    double expected_edges = 10.0;
    Index n = 100;
    double weight_low = 0.5;
    double weight_high = 2.0;
    /// Per-node noise standard deviation omega_j.
    double noise_sd = 1.0;
    bool random_sign = false;
    /// Apply a uniform node relabeling so edges do not follow index order.
    bool relabel = true;
    std::uint64_t seed = 1;

    void validate() const;
};

WeightedDag random_dag(const SimConfig& cfg, Rng& rng);

struct Sample {
    /// n x p draws on the model scale.
    Matrix raw;
    /// Centered and normalized copy of `raw`.
    Dataset data;
};

/// Ancestral sampling: in topological order X_j = sum_i beta_ij X_i + e_j
/// with e_j ~ N(0, omega_j^2).
Sample sample_sem(const WeightedDag& dag, Index n, Rng& rng);

/// Population covariance (I - B)^{-T} Omega (I - B)^{-1}.
Matrix population_covariance(const WeightedDag& dag);

} // namespace ccdr
