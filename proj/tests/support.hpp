#pragma once

#include <ccdr/graph.hpp>
#include <ccdr/model.hpp>
#include <ccdr/simulate.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

namespace ccdr::testing {

inline Matrix chain_theta()
{
    Matrix t(3, 3);
    t << 2, -1, 0, -1, 2, -1, 0, -1, 1;
    return t;
}

/// X1 -> X2 -> X3 with unit weights and unit variances.
inline WeightedDag chain_dag()
{
    SparseAdjacency b(3);
    b.set(0, 1, 1.0);
    b.set(1, 2, 1.0);
    return WeightedDag(b, Vector::Ones(3));
}

/// beta12 = 1/2, beta13 = 1, beta32 = 1/2; Omega = diag(1, 1/2, 2).
inline WeightedDag alternate_dag()
{
    SparseAdjacency b(3);
    b.set(0, 1, 0.5);
    b.set(0, 2, 1.0);
    b.set(2, 1, 0.5);
    Vector w(3);
    w << 1.0, 0.5, 2.0;
    return WeightedDag(b, w);
}

inline Matrix gaussian_matrix(Index rows, Index cols, Rng& rng)
{
    std::normal_distribution<double> z;
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            m(i, j) = z(rng);
    return m;
}

inline Dataset random_dataset(Index n, Index p, Rng& rng)
{
    return Dataset::from_raw(gaussian_matrix(n, p, rng));
}

/// Data from a random sparse DAG so that coordinate descent has signal.
inline Dataset structured_dataset(Index n, Index p, double s0, std::uint64_t seed)
{
    SimConfig cfg;
    cfg.p = p;
    cfg.expected_edges = s0;
    Rng rng(seed);
    const WeightedDag dag = random_dag(cfg, rng);
    return sample_sem(dag, n, rng).data;
}

inline Matrix random_spd(Index p, Rng& rng)
{
    const Matrix a = gaussian_matrix(p, p, rng);
    return a * a.transpose() + 0.5 * Matrix::Identity(a.rows(), a.cols());
}

inline std::vector<Index> random_order(Index p, Rng& rng)
{
    std::vector<Index> order(p);
    std::iota(order.begin(), order.end(), Index{0});
    std::shuffle(order.begin(), order.end(), rng);
    return order;
}

/// Random acyclic support (edges follow a random order) with weights in
/// +-[low, high].
inline SparseAdjacency random_acyclic(Index p, double density, Rng& rng, double low = 0.2,
                                      double high = 1.5)
{
    const auto order = random_order(p, rng);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_real_distribution<double> w(low, high);
    SparseAdjacency adj(p);
    for (Index a = 0; a < p; ++a)
        for (Index b = a + 1; b < p; ++b)
            if (u(rng) < density)
                adj.set(order[a], order[b], (u(rng) < 0.5 ? -1.0 : 1.0) * w(rng));
    return adj;
}

inline ReparamState random_state(Index p, double density, Rng& rng)
{
    std::uniform_real_distribution<double> r(0.5, 2.0);
    Vector rho(static_cast<Eigen::Index>(p));
    for (auto& v : rho)
        v = r(rng);
    return ReparamState(random_acyclic(p, density, rng), rho);
}

inline WeightedDag random_weighted_dag(Index p, double density, Rng& rng)
{
    std::uniform_real_distribution<double> r(0.3, 2.0);
    Vector w(static_cast<Eigen::Index>(p));
    for (auto& v : w)
        v = r(rng);
    return WeightedDag(random_acyclic(p, density, rng), w);
}

inline double frobenius_gap(const Matrix& a, const Matrix& b) { return (a - b).norm(); }

} // namespace ccdr::testing
