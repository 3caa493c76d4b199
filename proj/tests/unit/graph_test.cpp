#include <doctest.h>

#include <random>

#include "sfj/graph.hpp"
#include "support/random_graphs.hpp"

using namespace sfj;

TEST_SUITE("graph") {

TEST_CASE("constructor rejects invalid graphs") {
    CHECK_THROWS_AS(SignedDigraph(2, {{1, 2, 0.0}}, {1.0, 0.0}, {0.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(SignedDigraph(2, {{1, 3, 1.0}}, {1.0, 0.0}, {0.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(SignedDigraph(2, {{0, 1, 1.0}}, {1.0, 0.0}, {0.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(SignedDigraph(2, {{1, 2, 1.0}, {1, 2, -1.0}}, {1.0, 0.0}, {0.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(SignedDigraph(2, {}, {1.5, 0.0}, {0.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(SignedDigraph(2, {}, {-0.1, 0.0}, {0.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(SignedDigraph(2, {}, {1.0}, {0.0, 0.0}), ValidationError);
    CHECK_NOTHROW(SignedDigraph(2, {{1, 2, -3.0}, {2, 1, 1.0}}, {1.0, 0.0}, {0.0, 0.0}));
}

TEST_CASE("symmetric in-weights normalize to +-1/2") {
    const SignedDigraph g(3, {{2, 1, 2.0}, {3, 1, -2.0}}, {0.0, 1.0, 1.0}, {0, 0, 0});
    const NormalizedSystem sys = normalize(g);
    CHECK(sys.W(0, 1) == doctest::Approx(0.5));
    CHECK(sys.W(0, 2) == doctest::Approx(-0.5));
    CHECK(sys.W(0, 0) == 0.0);
}

TEST_CASE("agent without in-edges gets the self-loop fallback") {
    const SignedDigraph g(3, {{1, 2, 1.0}}, {1.0, 0.0, 0.0}, {0, 0, 0});
    const NormalizedSystem sys = normalize(g);
    CHECK(sys.W(0, 0) == 1.0);
    CHECK(sys.W.row(0).cwiseAbs().sum() == 1.0);
    CHECK(sys.W(2, 2) == 1.0);
    CHECK(sys.W(2, 0) == 0.0);
    CHECK(sys.W(2, 1) == 0.0);
}

TEST_CASE("rows of W have unit absolute sum and keep edge signs") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const SignedDigraph g = testing::random_graph(rng, {.min_n = 1, .max_n = 30});
        const NormalizedSystem sys = normalize(g);
        for (Eigen::Index i = 0; i < sys.W.rows(); ++i)
            REQUIRE(std::abs(sys.W.row(i).cwiseAbs().sum() - 1.0) <= 1e-12);
        for (const Edge& e : g.edges()) REQUIRE((sys.W(e.to - 1, e.from - 1) > 0) == (e.weight > 0));
        std::size_t nonzeros = 0;
        for (Eigen::Index i = 0; i < sys.W.rows(); ++i) {
            const bool no_in_edges = g.in_edges(static_cast<NodeId>(i + 1)).empty();
            nonzeros += no_in_edges ? 0 : static_cast<std::size_t>((sys.W.row(i).array() != 0.0).count());
        }
        REQUIRE(nonzeros == g.edges().size());
    }
}

TEST_CASE("normalization ignores positive per-row rescaling") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> scale(0.01, 100.0);
    for (int trial = 0; trial < 100; ++trial) {
        const SignedDigraph g = testing::random_graph(rng, {.max_n = 20});
        std::vector<double> row_scale(g.size());
        for (double& c : row_scale) c = scale(rng);
        std::vector<Edge> scaled = g.edges();
        for (Edge& e : scaled) e.weight *= row_scale[static_cast<std::size_t>(e.to - 1)];
        const Eigen::MatrixXd a = normalize(g).W;
        const Eigen::MatrixXd b = normalize(g.with_edges(scaled)).W;
        REQUIRE((a - b).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("reachability report") {
    SUBCASE("chain from the only stubborn agent") {
        const SignedDigraph g(3, {{1, 2, 1.0}, {2, 3, 1.0}}, {0.5, 0.0, 0.0}, {0, 0, 0});
        const ValidationReport r = check_assumption1(g);
        CHECK(r.assumption1_holds);
        CHECK(r.unreachable_nonstubborn.empty());
        CHECK(r.stubborn_count == 1);
    }
    SUBCASE("component without a stubborn agent") {
        const SignedDigraph g(5, {{1, 2, 1.0}, {3, 4, -1.0}, {4, 5, 1.0}, {5, 3, 1.0}},
                              {0.5, 0.0, 0.0, 0.0, 0.0}, {0, 0, 0, 0, 0});
        const ValidationReport r = check_assumption1(g);
        CHECK_FALSE(r.assumption1_holds);
        CHECK(r.unreachable_nonstubborn == std::vector<NodeId>{3, 4, 5});
        CHECK_THROWS_AS(require_assumption1(g), UnreachableNodes);
    }
    SUBCASE("all agents stubborn") {
        const SignedDigraph g(3, {}, {0.2, 0.3, 1.0}, {0, 0, 0});
        CHECK(check_assumption1(g).assumption1_holds);
    }
    SUBCASE("no stubborn agent") {
        const SignedDigraph g(2, {{1, 2, 1.0}}, {0.0, 0.0}, {0, 0});
        CHECK_THROWS_AS(check_assumption1(g), NoStubbornAgents);
    }
}

TEST_CASE("reachability agrees with all-pairs closure") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 300; ++trial) {
        const SignedDigraph g = testing::random_graph(rng, {.min_n = 1, .max_n = 10, .repair_reachability = false});
        const std::size_t n = g.size();
        // Floyd-Warshall style transitive closure.
        std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
        for (std::size_t i = 0; i < n; ++i) reach[i][i] = true;
        for (const Edge& e : g.edges()) reach[static_cast<std::size_t>(e.from - 1)][static_cast<std::size_t>(e.to - 1)] = true;
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (reach[i][k] && reach[k][j]) reach[i][j] = true;
        std::vector<NodeId> expected;
        for (std::size_t j = 0; j < n; ++j) {
            bool any = false;
            for (NodeId s : g.stubborn_agents()) any = any || reach[static_cast<std::size_t>(s - 1)][j];
            if (!any) expected.push_back(static_cast<NodeId>(j + 1));
        }
        const ValidationReport r = check_assumption1(g);
        REQUIRE(r.unreachable_nonstubborn == expected);
        REQUIRE(r.assumption1_holds == expected.empty());
    }
}

TEST_CASE("abs_graph") {
    Eigen::MatrixXd m(2, 2);
    m << -0.5, 0.5, 1.0, 0.0;
    Eigen::MatrixXd expected(2, 2);
    expected << 0.5, 0.5, 1.0, 0.0;
    CHECK(abs_graph(m) == expected);
    CHECK(abs_graph(expected) == expected);
    CHECK(abs_graph(abs_graph(m)) == abs_graph(m));
}

}
