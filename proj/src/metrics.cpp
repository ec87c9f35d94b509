#include <ccdr/errors.hpp>
#include <ccdr/metrics.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ccdr {

namespace {

Eigen::Index ei(Index i) { return static_cast<Eigen::Index>(i); }

} // namespace

StructureMetrics compare(const WeightedDag& estimate, const WeightedDag& truth,
                         const CompareOptions& options)
{
    if (estimate.p() != truth.p())
        throw DimensionMismatch("compare: estimate and truth have different node counts");
    const Index p = truth.p();
    StructureMetrics m;
    m.T = truth.edge_count();

    auto classify = [&](Index i, Index j, bool directed) {
        ++m.P;
        if (truth.edges().contains(i, j) || (!directed && truth.edges().contains(j, i)))
            ++m.TP;
        else if (truth.edges().contains(j, i))
            ++m.R;
        else
            ++m.FP;
    };
    estimate.edges().for_each_edge([&](Index i, Index j, double w) {
        if (std::abs(w) >= options.weight_tolerance)
            classify(i, j, true);
    });
    for (const auto& [a, b] : options.undirected) {
        if (a >= p || b >= p || a == b)
            throw std::invalid_argument("compare: invalid undirected edge");
        classify(a, b, false);
    }

    m.shd_dag = m.T - m.TP + m.FP;
    m.shd_skeleton = m.T - m.TP - m.R + m.FP;
    m.tpr = m.T > 0 ? double(m.TP) / double(m.T) : 0.0;
    m.fdr = m.P > 0 ? double(m.R + m.FP) / double(m.P) : 0.0;
    const double absent = 0.5 * double(p) * double(p - 1) - double(m.T);
    m.fpr = absent > 0.0 ? double(m.R + m.FP) / absent : 0.0;
    return m;
}

WeightedDag refit_ols(const SparseAdjacency& structure, const Dataset& train)
{
    if (structure.size() != train.p())
        throw DimensionMismatch("refit_ols: structure and data have different node counts");
    const Matrix x = train.centered();
    const double n = static_cast<double>(train.n());
    const Index p = train.p();

    SparseAdjacency beta(p);
    Vector omega2(ei(p));
    for (Index j = 0; j < p; ++j) {
        const auto parents = structure.parents(j);
        Vector resid = x.col(ei(j));
        if (!parents.empty()) {
            if (parents.size() >= train.n())
                throw std::invalid_argument("refit_ols: node " + std::to_string(j + 1) + " has " +
                                            std::to_string(parents.size()) +
                                            " parents, not fewer than n = " +
                                            std::to_string(train.n()));
            Matrix design(x.rows(), ei(parents.size()));
            for (Index c = 0; c < parents.size(); ++c)
                design.col(ei(c)) = x.col(ei(parents[c].parent));
            const auto qr = design.colPivHouseholderQr();
            if (qr.rank() < design.cols())
                throw std::invalid_argument("refit_ols: singular design for node " + std::to_string(j + 1));
            const Vector coef = qr.solve(resid);
            resid -= design * coef;
            for (Index c = 0; c < parents.size(); ++c)
                if (coef(ei(c)) != 0.0)
                    beta.set(parents[c].parent, j, coef(ei(c)));
        }
        omega2(ei(j)) = std::max(resid.squaredNorm() / n, 1e-300);
    }
    return WeightedDag(std::move(beta), std::move(omega2));
}

double mean_loglik(const WeightedDag& dag, const Matrix& centered_rows)
{
    if (static_cast<Index>(centered_rows.cols()) != dag.p())
        throw DimensionMismatch("mean_loglik: column count differs from node count");
    const double rows = static_cast<double>(centered_rows.rows());
    const double log_two_pi = std::log(2.0 * std::numbers::pi);
    double total = 0.0;
    for (Index j = 0; j < dag.p(); ++j) {
        Vector resid = centered_rows.col(ei(j));
        for (const auto& e : dag.edges().parents(j))
            resid -= e.value * centered_rows.col(ei(e.parent));
        const double w2 = dag.omega2()(ei(j));
        total += -0.5 * rows * (log_two_pi + std::log(w2)) - resid.squaredNorm() / (2.0 * w2);
    }
    return total / rows;
}

double test_loglik(const SparseAdjacency& structure, const Dataset& train, const Dataset& test)
{
    if (train.p() != test.p())
        throw DimensionMismatch("test_loglik: training and test data have different widths");
    const WeightedDag fitted = refit_ols(structure, train);
    const Matrix rows = test.raw().rowwise() - train.col_means().transpose();
    return mean_loglik(fitted, rows);
}

} // namespace ccdr
