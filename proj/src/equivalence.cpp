#include <ccdr/equivalence.hpp>
#include <ccdr/errors.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace ccdr {

namespace {

Eigen::Index ei(Index i) { return static_cast<Eigen::Index>(i); }

} // namespace

WeightedDag decompose_for_permutation(const PrecisionMatrix& theta, const Permutation& pi)
{
    if (pi.size() != theta.p())
        throw DimensionMismatch("permutation size does not match precision matrix");
    const Index p = theta.p();
    const LdlFactor f = ldl_decompose(pi.apply(theta.matrix()));

    // P_pi Theta = U diag(d) U' with U = I - L and D = diag(d)^{-1}.
    const Matrix l_strict = Matrix::Identity(ei(p), ei(p)) - f.unit_lower;
    const Vector d = f.pivots.cwiseInverse();

    const Permutation inv = pi.inverse();
    const Matrix b = inv.apply(l_strict);
    const Vector omega2 = inv.apply(d);

    SparseAdjacency edges(p);
    for (Index j = 0; j < p; ++j)
        for (Index i = 0; i < p; ++i)
            if (i != j && b(ei(i), ei(j)) != 0.0)
                edges.set(i, j, b(ei(i), ei(j)));
    return WeightedDag(std::move(edges), omega2);
}

bool is_compatible(const WeightedDag& dag, const Permutation& pi)
{
    if (pi.size() != dag.p())
        throw DimensionMismatch("permutation size does not match DAG");
    // (P_pi B)(a, b) = B(pi(a), pi(b)) must vanish for a <= b.
    const Permutation inv = pi.inverse();
    bool ok = true;
    dag.edges().for_each_edge([&](Index i, Index j, double) {
        if (inv.at(i) <= inv.at(j))
            ok = false;
    });
    return ok;
}

bool approx_equal(const WeightedDag& a, const WeightedDag& b, double tol)
{
    if (a.p() != b.p() || a.edge_count() != b.edge_count())
        return false;
    if ((a.omega2() - b.omega2()).cwiseAbs().maxCoeff() > tol)
        return false;
    bool same = true;
    a.edges().for_each_edge([&](Index i, Index j, double w) {
        const double other = b.weight(i, j);
        if (other == 0.0 || std::abs(other - w) > tol)
            same = false;
    });
    return same;
}

std::vector<WeightedDag> enumerate_equivalence_class(const PrecisionMatrix& theta)
{
    const Index p = theta.p();
    if (p > kMaxEnumerationNodes)
        throw std::invalid_argument("enumerate_equivalence_class: p = " + std::to_string(p) +
                                    " exceeds the limit of " + std::to_string(kMaxEnumerationNodes));
    std::vector<WeightedDag> members;
    std::vector<Index> order = Permutation::identity(p).values();
    do {
        // Cholesky factors carry rounding noise; entries this small relative
        // to theta are structural zeros.
        WeightedDag dag = decompose_for_permutation(theta, Permutation(order));
        const double drop = 1e-12 * std::max(1.0, theta.matrix().cwiseAbs().maxCoeff());
        SparseAdjacency cleaned(p);
        dag.edges().for_each_edge([&](Index i, Index j, double w) {
            if (std::abs(w) > drop)
                cleaned.set(i, j, w);
        });
        WeightedDag candidate(std::move(cleaned), dag.omega2());
        const bool seen = std::any_of(members.begin(), members.end(), [&](const WeightedDag& m) {
            return approx_equal(m, candidate, 1e-9);
        });
        if (!seen)
            members.push_back(std::move(candidate));
    } while (std::next_permutation(order.begin(), order.end()));
    return members;
}

bool permuted_cholesky_identity_check(const PrecisionMatrix& theta, const Permutation& pi)
{
    if (pi.size() != theta.p())
        throw DimensionMismatch("permutation size does not match precision matrix");
    const LdlFactor f = ldl_decompose(theta.matrix());
    const Matrix lhs = pi.apply(theta.matrix());
    const Matrix pl = pi.apply(f.unit_lower);
    const Matrix pd = pi.apply(Matrix(f.pivots.asDiagonal()));
    const Matrix rhs = pl * pd * pl.transpose();
    return (lhs - rhs).norm() <= 1e-9 * std::max(1.0, lhs.norm());
}

} // namespace ccdr
