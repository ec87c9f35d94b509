#include <ccdr/errors.hpp>
#include <ccdr/graph.hpp>
#include <ccdr/model.hpp>

#include <cmath>
#include <string>

namespace ccdr {

namespace {

using EIndex = Eigen::Index;

EIndex ei(Index i) { return static_cast<EIndex>(i); }

void require_acyclic(const SparseAdjacency& adj, const char* what)
{
    try {
        topological_sort(DirectedGraph::from_adjacency(adj));
    } catch (const CycleError& e) {
        throw CycleError(std::string(what) + ": " + e.what(), e.cycle());
    }
}

void require_same_p(Index a, Index b, const char* what)
{
    if (a != b)
        throw DimensionMismatch(std::string(what) + ": node count " + std::to_string(a) +
                                " does not match data with " + std::to_string(b) + " columns");
}

} // namespace

WeightedDag::WeightedDag(SparseAdjacency edges, Vector omega2)
    : edges_(std::move(edges)), omega2_(std::move(omega2))
{
    if (static_cast<Index>(omega2_.size()) != edges_.size())
        throw DimensionMismatch("WeightedDag: omega2 length differs from node count");
    for (EIndex j = 0; j < omega2_.size(); ++j) {
        if (!(omega2_(j) > 0.0) || !std::isfinite(omega2_(j)))
            throw std::invalid_argument("WeightedDag: noise variances must be positive and finite");
    }
    require_acyclic(edges_, "WeightedDag");
}

WeightedDag WeightedDag::empty(Index p)
{
    return WeightedDag(SparseAdjacency(p), Vector::Ones(ei(p)));
}

ReparamState::ReparamState(SparseAdjacency phi, Vector rho)
    : phi_(std::move(phi)), rho_(std::move(rho))
{
    if (static_cast<Index>(rho_.size()) != phi_.size())
        throw DimensionMismatch("ReparamState: rho length differs from node count");
    for (EIndex j = 0; j < rho_.size(); ++j) {
        if (!(rho_(j) > 0.0) || !std::isfinite(rho_(j)))
            throw std::invalid_argument("ReparamState: rho must be positive and finite");
    }
    require_acyclic(phi_, "ReparamState");
}

ReparamState ReparamState::null_model(Index p, double rho)
{
    return ReparamState(SparseAdjacency(p), Vector::Constant(ei(p), rho));
}

void ReparamState::set_rho(Index j, double value)
{
    if (!(value > 0.0) || !std::isfinite(value))
        throw std::domain_error("rho must be positive and finite");
    rho_(ei(j)) = value;
}

Dataset Dataset::from_raw(const Matrix& raw)
{
    if (raw.rows() < 2)
        throw DimensionMismatch("dataset needs at least two observations");
    if (raw.cols() < 1)
        throw DimensionMismatch("dataset needs at least one variable");

    Dataset d;
    d.means_ = raw.colwise().mean().transpose();
    d.x_ = raw.rowwise() - d.means_.transpose();
    d.norms_ = d.x_.colwise().norm().transpose();
    for (EIndex j = 0; j < d.x_.cols(); ++j) {
        // Rounding noise left after centering a constant column scales with |mean|.
        const double noise_floor = 1e-10 * std::abs(d.means_(j)) * std::sqrt(double(raw.rows()));
        if (!(d.norms_(j) > noise_floor) || !std::isfinite(d.norms_(j)))
            throw DegenerateColumn("column " + std::to_string(j + 1) + " is constant", Index(j));
        d.x_.col(j) /= d.norms_(j);
    }
    d.gram_ = d.x_.transpose() * d.x_;
    // Exact symmetry and unit diagonal.
    d.gram_ = (0.5 * (d.gram_ + d.gram_.transpose())).eval();
    d.gram_.diagonal().setOnes();
    return d;
}

Matrix Dataset::centered() const
{
    return x_ * norms_.asDiagonal();
}

Matrix Dataset::raw() const
{
    return centered().rowwise() + means_.transpose();
}

LdlFactor ldl_decompose(const Matrix& a)
{
    if (a.rows() != a.cols())
        throw DimensionMismatch("ldl_decompose: matrix must be square");
    const EIndex p = a.rows();
    const double scale = p > 0 ? a.diagonal().cwiseAbs().maxCoeff() : 0.0;
    LdlFactor f{Matrix::Identity(p, p), Vector::Zero(p)};
    for (EIndex j = 0; j < p; ++j) {
        double d = a(j, j);
        for (EIndex k = 0; k < j; ++k)
            d -= f.unit_lower(j, k) * f.unit_lower(j, k) * f.pivots(k);
        if (!(d > 1e-12 * scale))
            throw NotPositiveDefinite("matrix is not positive definite (pivot " + std::to_string(j + 1) +
                                      " = " + std::to_string(d) + ")");
        f.pivots(j) = d;
        for (EIndex i = j + 1; i < p; ++i) {
            double s = a(i, j);
            for (EIndex k = 0; k < j; ++k)
                s -= f.unit_lower(i, k) * f.unit_lower(j, k) * f.pivots(k);
            f.unit_lower(i, j) = s / d;
        }
    }
    return f;
}

PrecisionMatrix::PrecisionMatrix(Matrix theta) : theta_(std::move(theta))
{
    if (theta_.rows() != theta_.cols())
        throw NotPositiveDefinite("precision matrix must be square");
    const double norm = theta_.cwiseAbs().maxCoeff();
    if ((theta_ - theta_.transpose()).cwiseAbs().maxCoeff() > 1e-9 * std::max(norm, 1.0))
        throw NotPositiveDefinite("precision matrix is not symmetric");
    ldl_decompose(theta_);
}

double PrecisionMatrix::log_det() const
{
    return ldl_decompose(theta_).pivots.array().log().sum();
}

PrecisionMatrix theta_from_dag(const WeightedDag& dag)
{
    const EIndex p = ei(dag.p());
    const Matrix i_minus_b = Matrix::Identity(p, p) - dag.edges().to_dense();
    Matrix theta = i_minus_b * dag.omega2().cwiseInverse().asDiagonal() * i_minus_b.transpose();
    theta = (0.5 * (theta + theta.transpose())).eval();
    return PrecisionMatrix(std::move(theta));
}

PrecisionMatrix theta_from_reparam(const ReparamState& state)
{
    const Matrix r_minus_phi = Matrix(state.rho().asDiagonal()) - state.phi().to_dense();
    Matrix theta = r_minus_phi * r_minus_phi.transpose();
    theta = (0.5 * (theta + theta.transpose())).eval();
    return PrecisionMatrix(std::move(theta));
}

WeightedDag to_dag(const ReparamState& state)
{
    SparseAdjacency beta(state.p());
    state.phi().for_each_edge(
        [&](Index i, Index j, double phi) { beta.set(i, j, phi / state.rho(j)); });
    return WeightedDag(std::move(beta), state.rho().array().square().inverse().matrix());
}

ReparamState to_reparam(const WeightedDag& dag)
{
    const Vector rho = dag.omega2().array().sqrt().inverse().matrix();
    SparseAdjacency phi(dag.p());
    dag.edges().for_each_edge(
        [&](Index i, Index j, double beta) { phi.set(i, j, beta * rho(ei(j))); });
    return ReparamState(std::move(phi), rho);
}

double loglik_dag(const WeightedDag& dag, const Dataset& data)
{
    require_same_p(dag.p(), data.p(), "loglik_dag");
    const double n = static_cast<double>(data.n());
    const Matrix& x = data.x();
    double total = 0.0;
    for (Index j = 0; j < dag.p(); ++j) {
        Vector resid = x.col(ei(j));
        for (const auto& e : dag.edges().parents(j))
            resid -= e.value * x.col(ei(e.parent));
        const double w2 = dag.omega2()(ei(j));
        total += 0.5 * n * std::log(w2) + resid.squaredNorm() / (2.0 * w2);
    }
    return total;
}

double loglik_reparam(const ReparamState& state, const Dataset& data)
{
    require_same_p(state.p(), data.p(), "loglik_reparam");
    const double n = static_cast<double>(data.n());
    double total = 0.0;
    for (Index j = 0; j < state.p(); ++j) {
        const double rho = state.rho(j);
        if (!(rho > 0.0))
            throw std::domain_error("loglik_reparam: rho must be positive");
        const auto parents = state.phi().parents(j);
        double cross = 0.0;
        double quad = 0.0;
        for (const auto& a : parents) {
            cross += a.value * data.gram(a.parent, j);
            for (const auto& b : parents)
                quad += a.value * b.value * data.gram(a.parent, b.parent);
        }
        const double rss = rho * rho * data.gram(j, j) - 2.0 * rho * cross + quad;
        total += -n * std::log(rho) + 0.5 * rss;
    }
    return total;
}

double loglik_theta(const PrecisionMatrix& theta, const Dataset& data)
{
    require_same_p(theta.p(), data.p(), "loglik_theta");
    const double n = static_cast<double>(data.n());
    const double trace = theta.matrix().cwiseProduct(data.gram()).sum();
    return -0.5 * n * theta.log_det() + 0.5 * trace;
}

double bic_score(const WeightedDag& dag, const Dataset& data)
{
    const double n = static_cast<double>(data.n());
    const double free_params = static_cast<double>(dag.edge_count() + dag.p());
    return 2.0 * loglik_dag(dag, data) + free_params * std::log(n);
}

WeightedDag to_original_scale(const WeightedDag& dag, const Dataset& data)
{
    require_same_p(dag.p(), data.p(), "to_original_scale");
    const Vector& norms = data.col_norms();
    SparseAdjacency beta(dag.p());
    dag.edges().for_each_edge([&](Index i, Index j, double w) {
        beta.set(i, j, w * norms(ei(j)) / norms(ei(i)));
    });
    return WeightedDag(std::move(beta), dag.omega2().cwiseProduct(norms.cwiseAbs2()));
}

} // namespace ccdr
