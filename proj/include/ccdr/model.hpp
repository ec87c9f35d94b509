#pragma once

#include <ccdr/adjacency.hpp>

namespace ccdr {

/// Gaussian Bayesian network in the (B, Omega) parametrization: edge weights
/// beta_ij for i -> j plus per-node noise variances omega_j^2.
/// Invariants: acyclic support, no self-loops, all omega_j^2 > 0.
class WeightedDag {
public:
    WeightedDag(SparseAdjacency edges, Vector omega2);

    /// No edges, unit noise variances.
    static WeightedDag empty(Index p);

    Index p() const noexcept { return edges_.size(); }
    const SparseAdjacency& edges() const noexcept { return edges_; }
    const Vector& omega2() const noexcept { return omega2_; }
    double weight(Index parent, Index child) const { return edges_.get(parent, child); }
    Index edge_count() const noexcept { return edges_.edge_count(); }

    bool operator==(const WeightedDag& other) const
    {
        return edges_ == other.edges_ && omega2_ == other.omega2_;
    }

private:
    SparseAdjacency edges_;
    Vector omega2_;
};

/// The convex reparametrization: phi_ij = beta_ij / omega_j, rho_j = 1 / omega_j.
/// The solver mutates a state in place through set_phi/set_rho; those
/// mutators keep the positivity invariant on rho but leave acyclicity to the
/// caller (the solver checks it before every edge insertion).
class ReparamState {
public:
    ReparamState(SparseAdjacency phi, Vector rho);

    /// Phi = 0 and every rho_j = rho.
    static ReparamState null_model(Index p, double rho);

    Index p() const noexcept { return phi_.size(); }
    const SparseAdjacency& phi() const noexcept { return phi_; }
    const Vector& rho() const noexcept { return rho_; }
    double phi(Index parent, Index child) const { return phi_.get(parent, child); }
    double rho(Index j) const { return rho_(static_cast<Eigen::Index>(j)); }
    Index edge_count() const noexcept { return phi_.edge_count(); }

    void set_phi(Index parent, Index child, double value) { phi_.set(parent, child, value); }
    void set_rho(Index j, double value);

    bool operator==(const ReparamState& other) const
    {
        return phi_ == other.phi_ && rho_ == other.rho_;
    }

private:
    SparseAdjacency phi_;
    Vector rho_;
};

/// Column-centered, unit-norm n x p data with its Gram matrix.
class Dataset {
public:
    /// Centers every column and scales it to unit Euclidean norm. Throws
    /// DegenerateColumn for constant columns and DimensionMismatch for n < 2.
    static Dataset from_raw(const Matrix& raw);

    Index n() const noexcept { return static_cast<Index>(x_.rows()); }
    Index p() const noexcept { return static_cast<Index>(x_.cols()); }
    const Matrix& x() const noexcept { return x_; }
    const Vector& col_means() const noexcept { return means_; }
    const Vector& col_norms() const noexcept { return norms_; }
    const Matrix& gram() const noexcept { return gram_; }
    double gram(Index i, Index j) const
    {
        return gram_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }

    /// Centered data on the original scale (x with the column norms restored).
    Matrix centered() const;
    /// The original matrix (centered data plus the stored means).
    Matrix raw() const;

private:
    Matrix x_;
    Vector means_;
    Vector norms_;
    Matrix gram_;
};

/// Symmetric positive definite p x p matrix (a precision matrix Theta).
class PrecisionMatrix {
public:
    /// Throws NotPositiveDefinite when `theta` is not symmetric (1e-9
    /// relative) or an LDL' pivot falls below 1e-12 * max diagonal.
    explicit PrecisionMatrix(Matrix theta);

    Index p() const noexcept { return static_cast<Index>(theta_.rows()); }
    const Matrix& matrix() const noexcept { return theta_; }
    double operator()(Index i, Index j) const
    {
        return theta_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    double log_det() const;

private:
    Matrix theta_;
};

/// Unpivoted A = U diag(d) U' with U unit lower triangular.
struct LdlFactor {
    Matrix unit_lower;
    Vector pivots;
};

/// Throws NotPositiveDefinite when a pivot is < 1e-12 * max |diag(A)|.
LdlFactor ldl_decompose(const Matrix& a);

PrecisionMatrix theta_from_dag(const WeightedDag& dag);
PrecisionMatrix theta_from_reparam(const ReparamState& state);

WeightedDag to_dag(const ReparamState& state);
ReparamState to_reparam(const WeightedDag& dag);

/// Negative log-likelihood sum_j [ (n/2) log w_j^2 + |x_j - X b_j|^2 / (2 w_j^2) ]
/// on the normalized data; the (np/2) log(2 pi) constant is dropped.
double loglik_dag(const WeightedDag& dag, const Dataset& data);

/// sum_j [ -n log rho_j + |rho_j x_j - X phi_j|^2 / 2 ], evaluated through the
/// Gram matrix.
double loglik_reparam(const ReparamState& state, const Dataset& data);

/// -(n/2) log det Theta + tr(Theta S) / 2 with S = X'X.
double loglik_theta(const PrecisionMatrix& theta, const Dataset& data);

/// 2 * loglik_dag + (edges + p) * log n. Lower is better.
double bic_score(const WeightedDag& dag, const Dataset& data);

/// Rescales normalized-scale coefficients to the original data scale:
/// beta_ij * norm_j / norm_i and omega_j^2 * norm_j^2.
WeightedDag to_original_scale(const WeightedDag& dag, const Dataset& data);

} // namespace ccdr
