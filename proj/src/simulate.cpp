#include <ccdr/graph.hpp>
#include <ccdr/simulate.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ccdr {

void SimConfig::validate() const
{
    if (p < 1)
        throw std::invalid_argument("p must be >= 1");
    const double pairs = 0.5 * static_cast<double>(p) * static_cast<double>(p - 1);
    if (!(expected_edges >= 0.0) || expected_edges > pairs)
        throw std::invalid_argument("expected edges must lie in [0, p(p-1)/2]");
    if (!(weight_low <= weight_high))
        throw std::invalid_argument("weight range must satisfy low <= high");
    if (!(noise_sd > 0.0))
        throw std::invalid_argument("noise sd must be > 0");
    if (n < 1)
        throw std::invalid_argument("n must be >= 1");
}

WeightedDag random_dag(const SimConfig& cfg, Rng& rng)
{
    cfg.validate();
    const Index p = cfg.p;
    const double pairs = 0.5 * static_cast<double>(p) * static_cast<double>(p - 1);
    const double prob = pairs > 0.0 ? cfg.expected_edges / pairs : 0.0;

    std::vector<Index> label(p);
    std::iota(label.begin(), label.end(), Index{0});
    if (cfg.relabel)
        std::shuffle(label.begin(), label.end(), rng);

    std::bernoulli_distribution keep(std::clamp(prob, 0.0, 1.0));
    std::uniform_real_distribution<double> weight(cfg.weight_low, cfg.weight_high);
    std::bernoulli_distribution flip(0.5);

    SparseAdjacency edges(p);
    for (Index i = 0; i < p; ++i) {
        for (Index j = i + 1; j < p; ++j) {
            if (!keep(rng))
                continue;
            double w = weight(rng);
            if (cfg.random_sign && flip(rng))
                w = -w;
            edges.set(label[i], label[j], w);
        }
    }
    return WeightedDag(std::move(edges), Vector::Constant(static_cast<Eigen::Index>(p),
                                                          cfg.noise_sd * cfg.noise_sd));
}

Sample sample_sem(const WeightedDag& dag, Index n, Rng& rng)
{
    const std::vector<Index> order = topological_sort(DirectedGraph::from_adjacency(dag.edges()));
    const auto rows = static_cast<Eigen::Index>(n);
    Matrix raw(rows, static_cast<Eigen::Index>(dag.p()));
    std::normal_distribution<double> normal(0.0, 1.0);
    // Row-major generation keeps each observation's draws contiguous in the stream.
    for (Eigen::Index h = 0; h < rows; ++h) {
        for (Index j : order) {
            const auto col = static_cast<Eigen::Index>(j);
            double value = std::sqrt(dag.omega2()(col)) * normal(rng);
            for (const auto& e : dag.edges().parents(j))
                value += e.value * raw(h, static_cast<Eigen::Index>(e.parent));
            raw(h, col) = value;
        }
    }
    Dataset data = Dataset::from_raw(raw);
    return Sample{std::move(raw), std::move(data)};
}

Matrix population_covariance(const WeightedDag& dag)
{
    const auto p = static_cast<Eigen::Index>(dag.p());
    const Matrix i_minus_b = Matrix::Identity(p, p) - dag.edges().to_dense();
    const Matrix inv = i_minus_b.inverse();
    return inv.transpose() * Matrix(dag.omega2().asDiagonal()) * inv;
}

} // namespace ccdr
