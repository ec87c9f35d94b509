#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include <ccdr/graph.hpp>
#include <ccdr/simulate.hpp>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>

using namespace ccdr;
using namespace ccdr::testing;

namespace {

Matrix sample_covariance(const Matrix& x)
{
    const Matrix c = x.rowwise() - x.colwise().mean();
    return c.transpose() * c / double(x.rows());
}

} // namespace

TEST_CASE("configuration validation")
{
    SimConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    auto bad = [](auto mutate) {
        SimConfig c;
        mutate(c);
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    };
    bad([](SimConfig& c) { c.expected_edges = 46.0; });  // C(10,2) = 45
    bad([](SimConfig& c) { c.expected_edges = -1.0; });
    bad([](SimConfig& c) { c.weight_low = 3.0; });
    bad([](SimConfig& c) { c.n = 0; });
    bad([](SimConfig& c) { c.noise_sd = 0.0; });
}

TEST_CASE("edge count extremes")
{
    SimConfig cfg;
    cfg.p = 7;
    Rng rng(1);
    cfg.expected_edges = 0.0;
    for (int i = 0; i < 20; ++i)
        CHECK(random_dag(cfg, rng).edge_count() == 0);
    cfg.expected_edges = 21.0;
    for (int i = 0; i < 20; ++i) {
        const WeightedDag d = random_dag(cfg, rng);
        CHECK(d.edge_count() == 21);
        CHECK(is_acyclic(d.edges()));
    }
}

TEST_CASE("mean edge count matches s0")
{
    SimConfig cfg;
    cfg.p = 20;
    cfg.expected_edges = 20.0;
    Rng rng(2);
    const int draws = 10000;
    double total = 0.0;
    for (int i = 0; i < draws; ++i)
        total += double(random_dag(cfg, rng).edge_count());
    const double pairs = 190.0;
    const double q = 20.0 / pairs;
    const double se = std::sqrt(pairs * q * (1.0 - q) / draws);
    CHECK(std::abs(total / draws - 20.0) < 3.0 * se);
}

TEST_CASE("edge count follows the binomial law")
{
    SimConfig cfg;
    cfg.p = 6;
    cfg.expected_edges = 5.0;
    Rng rng(3);
    const int draws = 10000;
    const int pairs = 15;
    std::vector<double> observed(pairs + 1, 0.0);
    for (int i = 0; i < draws; ++i)
        observed[random_dag(cfg, rng).edge_count()] += 1.0;

    boost::math::binomial_distribution<double> law(pairs, 5.0 / pairs);
    // Pool bins until each expected count reaches 5.
    double chi2 = 0.0;
    int bins = 0;
    double obs_acc = 0.0;
    double exp_acc = 0.0;
    for (int k = 0; k <= pairs; ++k) {
        obs_acc += observed[k];
        exp_acc += draws * boost::math::pdf(law, k);
        if (exp_acc >= 5.0 && k < pairs) {
            chi2 += (obs_acc - exp_acc) * (obs_acc - exp_acc) / exp_acc;
            ++bins;
            obs_acc = exp_acc = 0.0;
        }
    }
    chi2 += exp_acc > 0.0 ? (obs_acc - exp_acc) * (obs_acc - exp_acc) / exp_acc : 0.0;
    ++bins;
    const boost::math::chi_squared_distribution<double> ref(bins - 1);
    CHECK(chi2 < boost::math::quantile(boost::math::complement(ref, 0.001)));
}

TEST_CASE("weights, acyclicity and relabeling")
{
    SimConfig cfg;
    cfg.p = 12;
    cfg.expected_edges = 20.0;
    Rng rng(4);
    bool backwards = false;
    for (int i = 0; i < 200; ++i) {
        const WeightedDag d = random_dag(cfg, rng);
        CHECK(is_acyclic(d.edges()));
        CHECK(d.omega2() == Vector::Ones(12));
        d.edges().for_each_edge([&](Index a, Index b, double w) {
            CHECK(w >= 0.5);
            CHECK(w <= 2.0);
            backwards = backwards || a > b;
        });
    }
    CHECK(backwards);

    cfg.relabel = false;
    for (int i = 0; i < 50; ++i)
        random_dag(cfg, rng).edges().for_each_edge([](Index a, Index b, double) { CHECK(a < b); });

    cfg.random_sign = true;
    bool negative = false;
    for (int i = 0; i < 50; ++i)
        random_dag(cfg, rng).edges().for_each_edge([&](Index, Index, double w) { negative = negative || w < 0; });
    CHECK(negative);
}

TEST_CASE("sampling is reproducible for a fixed seed")
{
    SimConfig cfg;
    cfg.p = 8;
    cfg.expected_edges = 8.0;
    Rng a(99);
    Rng b(99);
    const WeightedDag da = random_dag(cfg, a);
    const WeightedDag db = random_dag(cfg, b);
    CHECK(da == db);
    const Sample sa = sample_sem(da, 50, a);
    const Sample sb = sample_sem(db, 50, b);
    CHECK(sa.raw == sb.raw);
}

TEST_CASE("population covariance inverts the precision matrix")
{
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        const WeightedDag d = random_weighted_dag(6, 0.4, rng);
        const Matrix sigma = population_covariance(d);
        const Matrix theta = theta_from_dag(d).matrix();
        CHECK(frobenius_gap(sigma * theta, Matrix::Identity(6, 6)) < 1e-10);
    }
}

TEST_CASE("empty DAG sample covariance approaches the identity")
{
    Rng rng(6);
    const Sample s = sample_sem(WeightedDag::empty(4), 10000, rng);
    CHECK(frobenius_gap(sample_covariance(s.raw), Matrix::Identity(4, 4)) < 0.1);
    CHECK(s.data.n() == 10000);
}

TEST_CASE("chain sample precision approaches the example matrix")
{
    Rng rng(7);
    const Sample s = sample_sem(chain_dag(), 100000, rng);
    const Matrix precision = sample_covariance(s.raw).inverse();
    CHECK(frobenius_gap(precision, chain_theta()) < 0.1);
}

TEST_CASE("single node variance")
{
    Rng rng(8);
    Vector w(1);
    w << 4.0;
    const Sample s = sample_sem(WeightedDag(SparseAdjacency(1), w), 100000, rng);
    CHECK(sample_covariance(s.raw)(0, 0) == doctest::Approx(4.0).epsilon(0.03));
}
