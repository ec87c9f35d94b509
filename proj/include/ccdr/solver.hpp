#pragma once

#include <ccdr/graph.hpp>
#include <ccdr/model.hpp>
#include <ccdr/penalty.hpp>

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace ccdr {

/// Settings for a full regularization path.
struct SolverConfig {
    /// Family and gamma; lambda is filled in per path point.
    PenaltyConfig penalty = PenaltyConfig::mcp(0.0, 2.0);
    /// Stop sweeping when max |delta phi| < epsilon.
    double epsilon = 1e-4;
    /// Bound M on both inner active-set sweeps and outer stabilization
    /// rounds. Unset means max(ceil(sqrt(p)), 10).
    std::optional<int> max_iters;
    /// Halt the path once an estimate has more than alpha * p edges.
    double alpha_threshold = 3.0;
    int n_lambda = 20;
    double lambda_min_ratio = 0.05;
    /// Run a full topological sort after every block update (tests only).
    bool check_acyclic_each_update = false;

    void validate() const;
    int resolved_max_iters(Index p) const;
};

struct PathPoint {
    double lambda = 0.0;
    WeightedDag estimate;
    ReparamState reparam;
    Index edge_count = 0;
    int sweeps_used = 0;
    bool converged = false;
    /// Final value of the penalized objective Q.
    double objective = 0.0;
    double seconds = 0.0;
};

struct SolutionPath {
    std::vector<PathPoint> points;
    bool halted_early = false;
    double total_seconds = 0.0;
};

/// A block is the unordered pair {phi_kj, phi_jk} with k < j.
using Block = std::pair<Index, Index>;

/// Called after every single parameter or block update inside a sweep.
using UpdateObserver = std::function<void(const ReparamState&)>;

/// Penalized objective Q = loglik_reparam + sum_ij p_lambda(|phi_ij|).
double objective(const ReparamState& state, const Dataset& data, const PenaltyConfig& cfg);

/// Unpenalized minimizer direction for phi_kj via the Gram matrix:
/// rho_j <x_j, x_k> - sum_{i != k} phi_ij <x_i, x_k>.
double phi_tilde(const ReparamState& state, const Dataset& data, Index k, Index j);

/// argmin over phi_kj of Q with everything else fixed.
double update_phi(const ReparamState& state, const Dataset& data, Index k, Index j,
                  const PenaltyConfig& cfg);

/// argmin over rho_j: (c + sqrt(c^2 + 4n)) / 2 with c = sum_i phi_ij <x_i, x_j>.
double update_rho(const ReparamState& state, const Dataset& data, Index j);

/// Minimizes Q jointly over the block {phi_kj, phi_jk} subject to
/// acyclicity, in place. Returns the largest absolute change in the block.
double block_update(ReparamState& state, const Dataset& data, Index k, Index j,
                    const PenaltyConfig& cfg, AncestorSearch& search);
double block_update(ReparamState& state, const Dataset& data, Index k, Index j,
                    const PenaltyConfig& cfg);

struct SweepResult {
    double max_change = 0.0;
};

/// One sweep: update every rho_j, then every block in `blocks` (all k < j
/// pairs in lexicographic order when `blocks` is empty).
SweepResult sweep(ReparamState& state, const Dataset& data, const PenaltyConfig& cfg,
                  std::span<const Block> blocks = {}, const UpdateObserver& observer = {},
                  AncestorSearch* search = nullptr);

/// Blocks with at least one nonzero parameter, sorted.
std::vector<Block> active_blocks(const ReparamState& state);

/// Coordinate descent at a single lambda, warm-started from `init`: full
/// sweep to find the active set, then active-set sweeps to convergence,
/// repeated until the active set stops changing.
PathPoint fit_single_lambda(const ReparamState& init, const Dataset& data, const SolverConfig& cfg,
                            double lambda, const UpdateObserver& observer = {});

/// Linear grid from sqrt(n) down to sqrt(n) * lambda_min_ratio.
std::vector<double> lambda_grid(Index n, const SolverConfig& cfg);

/// The full path with warm starts and the alpha * p edge-count halt.
SolutionPath fit_path(const Dataset& data, const SolverConfig& cfg);

} // namespace ccdr
