#include <doctest.h>

#include <random>

#include "sfj/ltp.hpp"
#include "support/random_graphs.hpp"

using namespace sfj;

namespace {

using Set = std::set<NodeId>;

SignedDigraph g1() { return testing::load_fixture("G1.json"); }
SignedDigraph g2() { return testing::load_fixture("G2.json"); }

SignedDigraph flip_edge(const SignedDigraph& g, NodeId from, NodeId to) {
    std::vector<Edge> edges = g.edges();
    for (Edge& e : edges)
        if (e.from == from && e.to == to) e.weight = -e.weight;
    return g.with_edges(edges);
}

}  // namespace

TEST_SUITE("ltp") {

TEST_CASE("dominator tree of a chain") {
    const SignedDigraph g(3, {{1, 2, 1.0}, {2, 3, 1.0}}, {1.0, 0.0, 0.0}, {0, 0, 0});
    const DominatorTree t = build_dominator_tree(g);
    CHECK(t.idom[1] == DominatorTree::kVirtualRoot);
    CHECK(t.idom[2] == 1);
    CHECK(t.idom[3] == 2);
    CHECK(t.subtree[1] == Set{2, 3});
    CHECK(t.dominates(1, 3));
    CHECK_FALSE(t.dominates(3, 2));
}

TEST_CASE("two stubborn sources share no dominator") {
    const SignedDigraph g(3, {{1, 3, 1.0}, {2, 3, 1.0}}, {1.0, 0.5, 0.0}, {0, 0, 0});
    const DominatorTree t = build_dominator_tree(g);
    CHECK(t.idom[3] == DominatorTree::kVirtualRoot);
    const LtpCertificate cert = detect_ltp_agents(g, t);
    CHECK(cert.ltp_agents.empty());
    CHECK(brute_force_ltp_oracle(g).same_membership(cert));
}

TEST_CASE("stubborn agents hang off the virtual root") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const SignedDigraph g = testing::random_graph(rng, {.max_n = 20});
        const DominatorTree t = build_dominator_tree(g);
        for (NodeId s : g.stubborn_agents()) REQUIRE(t.idom[static_cast<std::size_t>(s)] == DominatorTree::kVirtualRoot);
        REQUIRE(t.unreachable.empty());
    }
}

TEST_CASE("unreachable nodes are flagged") {
    const SignedDigraph g(3, {{1, 2, 1.0}}, {1.0, 0.0, 0.0}, {0, 0, 0});
    const DominatorTree t = compute_dominator_tree(g);
    CHECK(t.unreachable == std::vector<NodeId>{3});
    CHECK(t.idom[3] == DominatorTree::kUnreachable);
    CHECK_THROWS_AS(build_dominator_tree(g), UnreachableNodes);
    CHECK_THROWS_AS(brute_force_ltp_oracle(g), UnreachableNodes);
    CHECK_THROWS_AS(build_dominator_tree(g.with_beta({0, 0, 0})), NoStubbornAgents);
}

TEST_CASE("G1 dominator tree") {
    // Values cross-checked against the brute-force path oracle below.
    const DominatorTree t = build_dominator_tree(g1());
    CHECK(t.idom[2] == DominatorTree::kVirtualRoot);
    CHECK(t.idom[3] == 2);
    CHECK(t.idom[4] == 3);
    CHECK(t.idom[5] == DominatorTree::kVirtualRoot);
    CHECK(t.idom[6] == 5);
}

TEST_CASE("G1 certificate") {
    const SignedDigraph g = g1();
    const LtpCertificate detected = detect_ltp_agents(g, build_dominator_tree(g));
    CHECK(detected.ltp_agents == Set{2, 5});
    CHECK(detected.persuaded.at(2) == Set{3, 4});
    CHECK(detected.persuaded.at(5) == Set{6});
    CHECK(detected.violations.empty());
    CHECK(brute_force_ltp_oracle(g).same_membership(detected));

    const LtpCertificate cert = check_conditions(g, detected);
    // Negative edge 3 -> 2 enters the LTP agent itself, which is allowed.
    CHECK(cert.cooperative);
    // Agent 1 is stubborn with nothing to persuade.
    CHECK_FALSE(cert.covered);
    CHECK(cert.uncovered == std::vector<NodeId>{1});
}

TEST_CASE("G1 with a negative edge into a persuaded agent breaks C2") {
    const SignedDigraph g = flip_edge(g1(), 2, 3);
    const LtpCertificate cert = analyze(g);
    CHECK(cert.ltp_agents == Set{2, 5});
    CHECK_FALSE(cert.cooperative);
    bool flagged = false;
    for (const Violation& v : cert.violations) flagged = flagged || (v.node == 3 && v.reason.find("negative") != std::string::npos);
    CHECK(flagged);
}

TEST_CASE("G2 certificate and prediction") {
    const SignedDigraph g = g2();
    const LtpCertificate cert = analyze(g);
    CHECK(cert.ltp_agents == Set{1, 4, 7, 10});
    CHECK(cert.persuaded.at(1) == Set{2, 3});
    CHECK(cert.persuaded.at(4) == Set{5, 6});
    CHECK(cert.persuaded.at(7) == Set{8, 9});
    CHECK(cert.persuaded.at(10) == Set{11, 12});
    CHECK(cert.covered);
    CHECK(cert.cooperative);
    CHECK(brute_force_ltp_oracle(g).same_membership(cert));

    const ClusterPrediction p = predict_clusters(cert, PredictionMode::strict);
    CHECK(p.clusters == Partition{{1, 2, 3}, {4, 5, 6}, {7, 8, 9}, {10, 11, 12}});
    CHECK(p.guaranteed == std::vector<bool>{true, true, true, true});
}

TEST_CASE("prediction modes") {
    const LtpCertificate cert = analyze(g1());
    CHECK_THROWS_AS(predict_clusters(cert, PredictionMode::strict), ConditionsNotMet);
    const ClusterPrediction relaxed = predict_clusters(cert, PredictionMode::relaxed);
    CHECK(relaxed.clusters == Partition{{1}, {2, 3, 4}, {5, 6}});
    CHECK(relaxed.guaranteed == std::vector<bool>{false, true, true});

    const SignedDigraph none(3, {{1, 3, 1.0}, {2, 3, 1.0}}, {1.0, 0.5, 0.0}, {0, 0, 0});
    CHECK_THROWS_AS(predict_clusters(analyze(none), PredictionMode::strict), ConditionsNotMet);
}

TEST_CASE("oracle on tiny cases") {
    SUBCASE("single edge") {
        const SignedDigraph g(2, {{1, 2, 1.0}}, {1.0, 0.0}, {0, 0});
        const LtpCertificate cert = brute_force_ltp_oracle(g);
        CHECK(cert.ltp_agents == Set{1});
        CHECK(cert.persuaded.at(1) == Set{2});
    }
    SUBCASE("three stubborn agents, complete bidirectional") {
        std::vector<Edge> edges;
        for (NodeId i = 1; i <= 3; ++i)
            for (NodeId j = 1; j <= 3; ++j)
                if (i != j) edges.push_back({i, j, 1.0});
        const SignedDigraph g(3, edges, {0.5, 0.5, 0.5}, {0, 0, 0});
        CHECK(brute_force_ltp_oracle(g).ltp_agents.empty());
        CHECK(analyze(g).ltp_agents.empty());
    }
    SUBCASE("size limit") {
        const SignedDigraph g(13, {}, std::vector<double>(13, 1.0), std::vector<double>(13, 0.0));
        CHECK_THROWS_AS(brute_force_ltp_oracle(g), SizeLimit);
    }
}

TEST_CASE("dominator detection matches path enumeration") {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 300; ++trial) {
        const SignedDigraph g = testing::random_graph(rng);
        const LtpCertificate fast = detect_ltp_agents(g, build_dominator_tree(g));
        const LtpCertificate slow = brute_force_ltp_oracle(g);
        REQUIRE(fast.same_membership(slow));
    }
}

TEST_CASE("certificate structure invariants") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 300; ++trial) {
        const SignedDigraph g = testing::random_graph(rng, {.max_n = 25});
        const LtpCertificate cert = detect_ltp_agents(g, build_dominator_tree(g));
        REQUIRE(cert.violations.empty());
        Set seen;
        for (const auto& [p, members] : cert.persuaded) {
            REQUIRE_FALSE(members.empty());
            for (NodeId q : members) {
                REQUIRE_FALSE(g.is_stubborn(q));
                REQUIRE(seen.insert(q).second);
                for (NodeId t : g.in_neighbours(q)) REQUIRE((t == p || members.contains(t)));
            }
        }
    }
}

TEST_CASE("membership ignores weights and signs") {
    std::mt19937_64 rng(34);
    for (int trial = 0; trial < 200; ++trial) {
        const SignedDigraph g = testing::random_graph(rng, {.max_n = 20});
        const LtpCertificate base = analyze(g);
        const LtpCertificate reweighted = analyze(testing::reweight(g, rng, false));
        const LtpCertificate resigned = analyze(testing::reweight(g, rng, true));
        REQUIRE(base.same_membership(reweighted));
        REQUIRE(base.same_membership(resigned));
        REQUIRE(base.covered == resigned.covered);
        REQUIRE(base.cooperative == reweighted.cooperative);
    }
}

}
