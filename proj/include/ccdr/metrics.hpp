#pragma once

#include <ccdr/model.hpp>

#include <utility>
#include <vector>

namespace ccdr {

/// Edge-classification counts of an estimate against a gold-standard DAG.
/// shd_dag = T - TP + FP and shd_skeleton = T - TP - R + FP.
struct StructureMetrics {
    Index P = 0;   ///< predicted edges
    Index TP = 0;  ///< correct orientation
    Index R = 0;   ///< in the true skeleton, reversed
    Index FP = 0;  ///< absent from the true skeleton
    Index T = 0;   ///< true edges
    Index shd_dag = 0;
    Index shd_skeleton = 0;
    double tpr = 0.0;
    double fdr = 0.0;
    double fpr = 0.0;
};

struct CompareOptions {
    /// Estimated weights with |w| below this are treated as absent.
    double weight_tolerance = 1e-8;
    /// Undirected estimated edges (0-based pairs). Each counts as predicted
    /// and scores as a true positive whenever the pair is in the true skeleton.
    std::vector<std::pair<Index, Index>> undirected;
};

StructureMetrics compare(const WeightedDag& estimate, const WeightedDag& truth,
                         const CompareOptions& options = {});

/// Refits the structure of `structure` on the original (centered) scale of
/// `train` by ordinary least squares per node; omega_j^2 is the mean squared
/// residual. Throws std::invalid_argument when a node has >= n parents.
WeightedDag refit_ols(const SparseAdjacency& structure, const Dataset& train);

/// Average per-observation Gaussian log-likelihood (with the log 2 pi term)
/// of `test`, under the OLS refit of `structure` on `train`. Test rows are
/// centered with the training means. Larger is better.
double test_loglik(const SparseAdjacency& structure, const Dataset& train, const Dataset& test);

/// Average per-observation log-likelihood of `centered_rows` under `dag`.
double mean_loglik(const WeightedDag& dag, const Matrix& centered_rows);

} // namespace ccdr
