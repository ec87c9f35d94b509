#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include <ccdr/errors.hpp>
#include <ccdr/model.hpp>

#include <cmath>

using namespace ccdr;
using namespace ccdr::testing;

namespace {

// Reference negative log-likelihood of a DAG written out with dense matrices.
double dense_loglik(const WeightedDag& dag, const Matrix& x)
{
    const Matrix b = dag.edges().to_dense();
    const Matrix resid = x - x * b;
    const double n = double(x.rows());
    double total = 0.0;
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double w2 = dag.omega2()(j);
        total += 0.5 * n * std::log(w2) + resid.col(j).squaredNorm() / (2.0 * w2);
    }
    return total;
}

} // namespace

TEST_CASE("WeightedDag and ReparamState reject invalid input")
{
    SparseAdjacency cyclic(2);
    cyclic.set(0, 1, 1.0);
    cyclic.set(1, 0, 1.0);
    CHECK_THROWS_AS(WeightedDag(cyclic, Vector::Ones(2)), CycleError);
    CHECK_THROWS_AS(ReparamState(cyclic, Vector::Ones(2)), CycleError);

    SparseAdjacency fine(2);
    fine.set(0, 1, 1.0);
    CHECK_THROWS_AS(WeightedDag(fine, Vector::Zero(2)), std::invalid_argument);
    CHECK_THROWS_AS(WeightedDag(fine, Vector::Ones(3)), DimensionMismatch);
    CHECK_THROWS(ReparamState(fine, -Vector::Ones(2)));

    ReparamState s = ReparamState::null_model(2, 1.0);
    CHECK_THROWS(s.set_rho(0, 0.0));
}

TEST_CASE("theta_from_dag examples")
{
    CHECK(theta_from_dag(chain_dag()).matrix().isApprox(chain_theta(), 1e-15));
    CHECK(theta_from_dag(WeightedDag::empty(4)).matrix() == Matrix::Identity(4, 4));
    CHECK(frobenius_gap(theta_from_dag(alternate_dag()).matrix(), chain_theta()) < 1e-14);
}

TEST_CASE("theta_from_reparam examples and cross-parametrization identity")
{
    CHECK(theta_from_reparam(ReparamState::null_model(3, 1.0)).matrix() == Matrix::Identity(3, 3));
    CHECK(frobenius_gap(theta_from_reparam(to_reparam(chain_dag())).matrix(), chain_theta()) < 1e-14);

    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const ReparamState s = random_state(5, 0.5, rng);
        const Matrix direct = theta_from_reparam(s).matrix();
        const Matrix via = theta_from_dag(to_dag(s)).matrix();
        CHECK(frobenius_gap(direct, via) < 1e-10 * direct.norm());
        CHECK_NOTHROW(ldl_decompose(via));
    }
}

TEST_CASE("to_dag and to_reparam examples")
{
    SparseAdjacency phi(2);
    phi.set(0, 1, 2.0);
    Vector rho(2);
    rho << 1.0, 2.0;
    const WeightedDag dag = to_dag(ReparamState(phi, rho));
    CHECK(dag.weight(0, 1) == doctest::Approx(1.0));
    CHECK(dag.omega2()(1) == doctest::Approx(0.25));

    Rng rng(1);
    const ReparamState unit(random_acyclic(4, 0.6, rng), Vector::Ones(4));
    const WeightedDag same = to_dag(unit);
    CHECK(same.edges() == unit.phi());
    CHECK(same.omega2() == Vector::Ones(4));

    Vector r(3);
    r << 0.5, 3.0, 7.0;
    CHECK(to_dag(ReparamState(SparseAdjacency(3), r)).edge_count() == 0);

    // Inverse direction mirrors the same three cases.
    SparseAdjacency beta(2);
    beta.set(0, 1, 1.0);
    Vector w(2);
    w << 1.0, 0.25;
    const ReparamState back = to_reparam(WeightedDag(beta, w));
    CHECK(back.phi(0, 1) == doctest::Approx(2.0));
    CHECK(back.rho(1) == doctest::Approx(2.0));
    CHECK(to_reparam(WeightedDag(unit.phi(), Vector::Ones(4))).phi() == unit.phi());
    CHECK(to_reparam(WeightedDag::empty(3)).edge_count() == 0);
}

TEST_CASE("round trip preserves support and values")
{
    Rng rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const ReparamState s = random_state(7, 0.4, rng);
        const ReparamState back = to_reparam(to_dag(s));
        REQUIRE(back.edge_count() == s.edge_count());
        s.phi().for_each_edge([&](Index i, Index j, double v) {
            CHECK(back.phi().contains(i, j));
            CHECK(std::abs(back.phi(i, j) - v) <= 1e-12 * std::max(1.0, std::abs(v)));
        });
        CHECK((back.rho() - s.rho()).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("Dataset normalizes columns")
{
    Rng rng(9);
    Matrix raw = gaussian_matrix(30, 4, rng);
    raw.col(2) = 5.0 * raw.col(2).array() + 100.0;
    const Dataset data = Dataset::from_raw(raw);
    for (Eigen::Index j = 0; j < 4; ++j) {
        CHECK(std::abs(data.x().col(j).norm() - 1.0) < 1e-12);
        CHECK(std::abs(data.x().col(j).sum()) < 1e-12);
        CHECK(data.gram(Index(j), Index(j)) == 1.0);
    }
    CHECK(data.gram().isApprox(data.gram().transpose(), 0.0));
    CHECK(data.col_means()(2) == doctest::Approx(raw.col(2).mean()));
    CHECK(data.raw().isApprox(raw, 1e-12));
    CHECK(data.centered().isApprox(raw.rowwise() - raw.colwise().mean(), 1e-12));

    Matrix constant = raw;
    constant.col(1).setConstant(3.25);
    try {
        Dataset::from_raw(constant);
        FAIL("expected DegenerateColumn");
    } catch (const DegenerateColumn& e) {
        CHECK(e.column() == 1);
    }
    CHECK_THROWS_AS(Dataset::from_raw(Matrix::Ones(1, 3)), DimensionMismatch);
}

TEST_CASE("PrecisionMatrix and LDL")
{
    Matrix asym = chain_theta();
    asym(0, 1) = -0.5;
    CHECK_THROWS_AS(PrecisionMatrix{asym}, NotPositiveDefinite);
    Matrix indefinite(2, 2);
    indefinite << 1, 2, 2, 1;
    CHECK_THROWS_AS(PrecisionMatrix{indefinite}, NotPositiveDefinite);

    const PrecisionMatrix theta(chain_theta());
    CHECK(theta.log_det() == doctest::Approx(std::log(chain_theta().determinant())).epsilon(1e-14));

    const LdlFactor f = ldl_decompose(chain_theta());
    const Matrix rebuilt = f.unit_lower * f.pivots.asDiagonal() * f.unit_lower.transpose();
    CHECK(frobenius_gap(rebuilt, chain_theta()) < 1e-14);
    CHECK(f.unit_lower.isLowerTriangular());
    CHECK(f.unit_lower.diagonal() == Vector::Ones(3));
}

TEST_CASE("likelihood examples")
{
    Rng rng(4);
    const Index n = 40;
    const Index p = 5;
    const Dataset data = random_dataset(n, p, rng);

    CHECK(loglik_dag(WeightedDag::empty(p), data) == doctest::Approx(p / 2.0));
    CHECK(loglik_theta(PrecisionMatrix(Matrix::Identity(5, 5)), data) == doctest::Approx(p / 2.0));

    const double rn = std::sqrt(double(n));
    const double expected = double(p) * double(n) * (1.0 - std::log(double(n))) / 2.0;
    CHECK(loglik_reparam(ReparamState::null_model(p, rn), data) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("likelihood routes agree")
{
    Rng rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        const Dataset data = random_dataset(25, 6, rng);
        const ReparamState s = random_state(6, 0.4, rng);
        const WeightedDag dag = to_dag(s);
        const double by_dag = loglik_dag(dag, data);
        const double by_reparam = loglik_reparam(s, data);
        const double by_theta = loglik_theta(theta_from_dag(dag), data);
        const double reference = dense_loglik(dag, data.x());
        const double tol = 1e-8 * (1.0 + std::abs(by_dag));
        CHECK(std::abs(by_dag - by_reparam) < tol);
        CHECK(std::abs(by_dag - by_theta) < tol);
        CHECK(std::abs(by_dag - reference) < tol);
    }
}

TEST_CASE("chain model on simulated data: DAG and reparametrized likelihoods agree")
{
    Rng rng(12);
    const Sample sample = sample_sem(chain_dag(), 500, rng);
    const WeightedDag dag = chain_dag();
    CHECK(loglik_dag(dag, sample.data) ==
          doctest::Approx(loglik_reparam(to_reparam(dag), sample.data)).epsilon(1e-12));
}

TEST_CASE("rho perturbations away from the closed-form optimum increase the likelihood")
{
    Rng rng(31);
    const Dataset data = random_dataset(50, 4, rng);
    ReparamState s = random_state(4, 0.5, rng);
    for (Index j = 0; j < 4; ++j) {
        double c = 0.0;
        for (const auto& e : s.phi().parents(j))
            c += e.value * data.gram(e.parent, j);
        s.set_rho(j, 0.5 * (c + std::sqrt(c * c + 200.0)));
    }
    const double best = loglik_reparam(s, data);
    for (Index j = 0; j < 4; ++j) {
        for (double delta : {-0.1, -1e-3, 1e-3, 0.1}) {
            ReparamState t = s;
            t.set_rho(j, s.rho(j) + delta);
            CHECK(loglik_reparam(t, data) > best);
        }
    }
}

TEST_CASE("reparametrized likelihood is midpoint convex")
{
    Rng rng(44);
    for (int trial = 0; trial < 100; ++trial) {
        const Dataset data = random_dataset(20, 5, rng);
        // Shared acyclic support for both endpoints so the segment stays valid.
        const SparseAdjacency support = random_acyclic(5, 0.5, rng);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        std::uniform_real_distribution<double> r(0.3, 3.0);
        auto endpoint = [&] {
            SparseAdjacency phi(5);
            support.for_each_edge([&](Index i, Index j, double) { phi.set(i, j, u(rng)); });
            Vector rho(5);
            for (auto& v : rho)
                v = r(rng);
            return ReparamState(phi, rho);
        };
        const ReparamState a = endpoint();
        const ReparamState b = endpoint();
        SparseAdjacency mid_phi(5);
        support.for_each_edge([&](Index i, Index j, double) {
            mid_phi.set(i, j, 0.5 * (a.phi(i, j) + b.phi(i, j)));
        });
        const ReparamState mid(mid_phi, 0.5 * (a.rho() + b.rho()));
        const double fa = loglik_reparam(a, data);
        const double fb = loglik_reparam(b, data);
        const double fm = loglik_reparam(mid, data);
        CHECK(fm <= 0.5 * (fa + fb) + 1e-9 * (1.0 + std::abs(fa) + std::abs(fb)));
    }
}

TEST_CASE("BIC")
{
    Rng rng(2);
    const Index n = 60;
    const Dataset data = random_dataset(n, 4, rng);
    const double logn = std::log(double(n));
    CHECK(bic_score(WeightedDag::empty(4), data) == doctest::Approx(2.0 * 2.0 + 4.0 * logn));

    // A near-zero edge barely moves the likelihood but costs log n.
    SparseAdjacency tiny(4);
    tiny.set(0, 1, 1e-12);
    const WeightedDag with_edge(tiny, Vector::Ones(4));
    CHECK(bic_score(with_edge, data) - bic_score(WeightedDag::empty(4), data) ==
          doctest::Approx(logn).epsilon(1e-9));
}

TEST_CASE("original-scale back transform")
{
    Rng rng(6);
    Matrix raw = gaussian_matrix(100, 2, rng);
    raw.col(1) = 3.0 * raw.col(0) + 0.5 * raw.col(1);
    const Dataset data = Dataset::from_raw(raw);
    SparseAdjacency b(2);
    b.set(0, 1, data.gram(0, 1));
    const WeightedDag scaled = to_original_scale(WeightedDag(b, Vector::Ones(2)), data);
    // Normalized coefficient is the correlation; back on the raw scale it is the OLS slope.
    const Vector c0 = data.centered().col(0);
    const Vector c1 = data.centered().col(1);
    CHECK(scaled.weight(0, 1) == doctest::Approx(c0.dot(c1) / c0.squaredNorm()).epsilon(1e-12));
    CHECK(scaled.omega2()(1) == doctest::Approx(c1.squaredNorm()).epsilon(1e-12));
}
