#include <doctest.h>

#include <random>

#include "sfj/verification.hpp"
#include "support/random_graphs.hpp"

using namespace sfj;

namespace {

OpinionTrace converged_at(const Eigen::VectorXd& x) {
    OpinionTrace t;
    t.states = {x, x};
    t.iterations = 1;
    t.converged = true;
    return t;
}

}  // namespace

TEST_SUITE("verification") {

TEST_CASE("V-row clustering") {
    SUBCASE("identity gives singletons") {
        CHECK(clusters_from_V(Eigen::MatrixXd::Identity(3, 3)) == Partition{{1}, {2}, {3}});
    }
    SUBCASE("duplicated rows merge") {
        Eigen::MatrixXd V(4, 2);
        V << 1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0 + 1e-12;
        CHECK(clusters_from_V(V) == Partition{{1, 3}, {2, 4}});
        CHECK(cluster_diameter(V, {2, 4}) == doctest::Approx(1e-12).epsilon(1e-3));
    }
    SUBCASE("chained rows close transitively") {
        Eigen::MatrixXd V(3, 1);
        V << 0.0, 0.6, 1.2;
        CHECK(clusters_from_V(V, 0.5) == Partition{{1, 2, 3}});
        CHECK(clusters_from_V(V, 0.4) == Partition{{1}, {2}, {3}});
    }
}

TEST_CASE("G2 influence rows form the four LTP clusters") {
    const SignedDigraph g = testing::load_fixture("G2.json");
    const Partition predicted = predict_clusters(analyze(g), PredictionMode::strict).clusters;
    const ClusterReport report = compare_with_V(predicted, influence_matrix(g).V);
    CHECK(report.observed.size() == 4);
    CHECK(report.match);
    CHECK(report.observed == predicted);
    CHECK(report.max_within_cluster_spread <= 1e-8);
    CHECK(report.observed_diameters.size() == 4);
}

TEST_CASE("trace clustering") {
    SUBCASE("fully stubborn agents keep distinct opinions") {
        const SignedDigraph g(3, {{1, 2, 1.0}, {2, 3, 1.0}}, {1.0, 1.0, 1.0}, {1.0, 2.0, 3.0});
        CHECK(clusters_from_trace(simulate(g)) == Partition{{1}, {2}, {3}});
    }
    SUBCASE("constant x0 on a cooperative graph is one cluster") {
        const SignedDigraph g(3, {{1, 2, 1.0}, {2, 3, 2.0}, {3, 2, 1.0}}, {0.5, 0.0, 0.0}, {4.0, 4.0, 4.0});
        CHECK(clusters_from_trace(simulate(g)) == Partition{{1, 2, 3}});
    }
    SUBCASE("sorted gaps") {
        const OpinionTrace t = converged_at(Eigen::Vector4d(5.0, 1.0, 5.0 + 1e-9, 1.0));
        CHECK(clusters_from_trace(t) == Partition{{1, 3}, {2, 4}});
        CHECK(clusters_from_trace(t, 1e-11) == Partition{{1}, {2, 4}, {3}});
    }
    SUBCASE("unconverged trace is rejected") {
        OpinionTrace t = converged_at(Eigen::Vector2d(0, 1));
        t.converged = false;
        CHECK_THROWS_AS(clusters_from_trace(t), NotConverged);
    }
}

TEST_CASE("refinement") {
    CHECK(refines({{1}, {2}, {3}}, {{1, 2}, {3}}));
    CHECK(refines({{1, 2}, {3}}, {{1, 2}, {3}}));
    CHECK_FALSE(refines({{1, 3}, {2}}, {{1, 2}, {3}}));
}

TEST_CASE("LTP prediction refines the V-row grouping") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 200; ++trial) {
        const SignedDigraph g = testing::random_graph(rng, {.max_n = 20, .negative_prob = 0.2});
        const LtpCertificate cert = analyze(g);
        if (!cert.covered || !cert.cooperative || cert.ltp_agents.empty()) continue;
        const Partition predicted = predict_clusters(cert, PredictionMode::strict).clusters;
        REQUIRE(compare_with_V(predicted, influence_matrix(g).V).match);
    }
}

TEST_CASE("robustness harness on G2") {
    const SignedDigraph g = testing::load_fixture("G2.json");
    const RobustnessReport report = robustness_harness(g, {.trials = 40, .seed = 5});
    CHECK(report.trials == 40);
    CHECK(report.passes == 40);
    CHECK(report.failed_trials.empty());
    CHECK(report.prediction_stable);
    CHECK(report.worst_spread <= 1e-8);

    const RobustnessReport again = robustness_harness(g, {.trials = 40, .seed = 5});
    CHECK(again.worst_spread == report.worst_spread);
}

TEST_CASE("redrawn weights keep signs and ranges") {
    const SignedDigraph g = testing::load_fixture("G2.json");
    const SignedDigraph drawn = redraw_weights(g, 9);
    REQUIRE(drawn.edges().size() == g.edges().size());
    for (std::size_t k = 0; k < g.edges().size(); ++k) {
        CHECK(drawn.edges()[k].from == g.edges()[k].from);
        CHECK(drawn.edges()[k].to == g.edges()[k].to);
        CHECK((drawn.edges()[k].weight > 0) == (g.edges()[k].weight > 0));
        CHECK(std::abs(drawn.edges()[k].weight) >= 0.1);
        CHECK(std::abs(drawn.edges()[k].weight) <= 10.0);
    }
    for (NodeId i = 1; i <= 12; ++i) {
        CHECK(drawn.is_stubborn(i) == g.is_stubborn(i));
        CHECK(drawn.beta(i) <= 1.0);
    }
    CHECK(redraw_weights(g, 9) == drawn);
    CHECK_FALSE(redraw_weights(g, 10) == drawn);
}

TEST_CASE("conditions gate the harness") {
    const SignedDigraph g1 = testing::load_fixture("G1.json");
    CHECK_THROWS_AS(robustness_harness(g1, {.trials = 5}), ConditionsNotMet);
    const RobustnessReport relaxed = robustness_harness(g1, {.trials = 5, .mode = PredictionMode::relaxed});
    CHECK(relaxed.trials == 5);
    CHECK(relaxed.predicted == Partition{{1}, {2, 3, 4}, {5, 6}});

    // Negative edge into a persuaded agent of G2.
    std::vector<Edge> edges = testing::load_fixture("G2.json").edges();
    for (Edge& e : edges)
        if (e.from == 1 && e.to == 2) e.weight = -e.weight;
    const SignedDigraph broken = testing::load_fixture("G2.json").with_edges(edges);
    CHECK_THROWS_AS(robustness_harness(broken, {.trials = 5}), ConditionsNotMet);
    CHECK_NOTHROW(robustness_harness(broken, {.trials = 5, .mode = PredictionMode::relaxed}));
}

}
