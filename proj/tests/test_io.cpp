#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include <ccdr/io.hpp>

#include <sstream>

using namespace ccdr;
using namespace ccdr::testing;

TEST_CASE("CSV with and without header")
{
    std::istringstream with("a,b\n1,2\n\n3.5,-4e-3\n");
    const auto t = io::read_csv(with);
    CHECK(t.header == std::vector<std::string>{"a", "b"});
    REQUIRE(t.values.rows() == 2);
    CHECK(t.values(1, 1) == -4e-3);

    std::istringstream without("1, 2\n3,4\n");
    const auto u = io::read_csv(without);
    CHECK(u.header.empty());
    CHECK(u.values(1, 0) == 3.0);
}

TEST_CASE("malformed CSV")
{
    std::istringstream ragged("1,2\n3\n");
    CHECK_THROWS_AS(io::read_csv(ragged), io::ParseError);
    std::istringstream text("x,y\n1,2\n3,abc\n");
    CHECK_THROWS_AS(io::read_csv(text), io::ParseError);
    std::istringstream empty("x,y\n");
    CHECK_THROWS_AS(io::read_csv(empty), io::ParseError);
}

TEST_CASE("CSV round trip is exact")
{
    Rng rng(1);
    const Matrix m = gaussian_matrix(7, 3, rng);
    std::ostringstream out;
    io::write_csv(out, m);
    std::istringstream in(out.str());
    const auto t = io::read_csv(in);
    CHECK(t.header == std::vector<std::string>{"x1", "x2", "x3"});
    CHECK(t.values == m);
}

TEST_CASE("edge list round trip")
{
    SparseAdjacency a(5);
    a.set(3, 0, 0.1);
    a.set(0, 4, -1.0 / 3.0);
    a.set(1, 2, 2.0);
    std::ostringstream out;
    io::write_edge_list(out, a, 1.25);
    CHECK(out.str().rfind("# p=5 lambda=1.25\n", 0) == 0);
    CHECK(out.str().find("4 1 0.10000000000000001\n") != std::string::npos);

    std::istringstream in(out.str());
    const auto list = io::read_edge_list(in);
    CHECK(list.p == 5);
    REQUIRE(list.lambda.has_value());
    CHECK(*list.lambda == 1.25);
    CHECK(list.edges == a);

    std::ostringstream empty;
    io::write_edge_list(empty, SparseAdjacency(3), std::nullopt);
    CHECK(empty.str() == "# p=3\n");
}

TEST_CASE("edge list parsing")
{
    std::istringstream undirected("# p=4\n1 2 0.5\n3 -- 4\n");
    const auto list = io::read_edge_list(undirected);
    CHECK(list.edges.edge_count() == 1);
    REQUIRE(list.undirected.size() == 1);
    CHECK(list.undirected[0] == std::pair<Index, Index>{2, 3});
    CHECK(io::to_weighted_dag(list).omega2() == Vector::Ones(4));

    std::istringstream no_header("1 2 0.5\n");
    CHECK_THROWS_AS(io::read_edge_list(no_header), io::ParseError);
    std::istringstream out_of_range("# p=2\n1 3 1\n");
    CHECK_THROWS_AS(io::read_edge_list(out_of_range), io::ParseError);
    std::istringstream self("# p=2\n2 2 1\n");
    CHECK_THROWS_AS(io::read_edge_list(self), io::ParseError);
}

TEST_CASE("fingerprint")
{
    Rng rng(2);
    Matrix m = gaussian_matrix(4, 3, rng);
    const std::string h = io::fingerprint(m);
    CHECK(h.size() == 64);
    CHECK(io::fingerprint(m) == h);
    m(2, 1) += 1e-12;
    CHECK(io::fingerprint(m) != h);
    CHECK(io::fingerprint(Matrix::Zero(2, 6)) != io::fingerprint(Matrix::Zero(3, 4)));
}

TEST_CASE("format_double keeps full precision")
{
    const double v = 0.1 + 0.2;
    CHECK(std::stod(io::format_double(v)) == v);
}
