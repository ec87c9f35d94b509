#pragma once

#include <ccdr/metrics.hpp>
#include <ccdr/solver.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace ccdr::bench {

/// How one estimate is picked from each solution path.
enum class Selection { oracle_shd, bic, none };

std::string_view to_string(Selection s);
Selection parse_selection(std::string_view name);

/// Simulation grid: every (p, s0/p, n) combination is run `replicates`
/// times. Replicates that differ only in n share the same random DAG.
struct BenchConfig {
    std::vector<Index> p_values{50};
    std::vector<double> s0_ratios{0.2, 0.5, 1.0, 2.0};
    std::vector<double> n_ratios{1.0, 5.0};
    /// When set, every cell uses this sample size instead of n_ratios.
    std::optional<Index> fixed_n;
    Index replicates = 20;
    SolverConfig solver;
    Selection select = Selection::oracle_shd;
    std::uint64_t seed = 1;
    unsigned jobs = 1;
    /// Draw an independent test set of the same size and score the selection.
    bool with_test_loglik = false;

    void validate() const;
};

struct Cell {
    Index p = 0;
    double s0_ratio = 0.0;
    Index n = 0;
    Index replicate = 0;
    std::uint64_t dag_seed = 0;
    std::uint64_t data_seed = 0;
};

struct PointSummary {
    double lambda = 0.0;
    StructureMetrics metrics;
    double seconds = 0.0;
};

struct ReplicateResult {
    Cell cell;
    PenaltyFamily family = PenaltyFamily::mcp;
    StructureMetrics selected;
    Index selected_index = 0;
    double selected_lambda = 0.0;
    Index path_length = 0;
    bool halted_early = false;
    bool all_acyclic = true;
    double total_seconds = 0.0;
    double average_seconds = 0.0;
    std::optional<double> test_loglik;
    std::vector<PointSummary> path;
};

struct Aggregate {
    Index count = 0;
    double T = 0, P = 0, TP = 0, R = 0, FP = 0, shd_dag = 0, shd_skeleton = 0;
    /// Ratios of the averaged counts (TP/T, (R+FP)/P).
    double tpr = 0, fdr = 0;
    /// Averages of the per-replicate ratios.
    double mean_tpr = 0, mean_fdr = 0, mean_fpr = 0;
    double mean_total_seconds = 0, max_total_seconds = 0, mean_average_seconds = 0;
    bool all_acyclic = true;
};

/// Expands the grid into cells with derived seeds, in a fixed order.
std::vector<Cell> expand_grid(const BenchConfig& cfg);

/// Index of the selected path point.
Index select_point(const SolutionPath& path, const WeightedDag& truth, const Dataset& data,
                   Selection select);

/// BIC of the OLS refit of `structure` on `data`: -2 loglik + (s + p) log n.
double refit_bic(const SparseAdjacency& structure, const Dataset& data);

ReplicateResult run_cell(const Cell& cell, const BenchConfig& cfg);

/// Runs every cell (across `jobs` worker threads); results are sorted by
/// (p, s0/p, n, replicate) regardless of completion order.
std::vector<ReplicateResult> run_bench(const BenchConfig& cfg);

Aggregate aggregate(std::span<const ReplicateResult> results);

void write_replicates_csv(std::ostream& out, std::span<const ReplicateResult> results);
void write_aggregate_csv(std::ostream& out, std::span<const ReplicateResult> results);
/// One row per path point of every replicate (for ROC-style plots).
void write_path_csv(std::ostream& out, std::span<const ReplicateResult> results);

} // namespace ccdr::bench
