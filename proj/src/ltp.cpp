#include "sfj/ltp.hpp"

#include <algorithm>
#include <cstdint>
#include <utility>

namespace sfj {

bool DominatorTree::dominates(NodeId p, NodeId q) const {
    if (q < 1 || static_cast<std::size_t>(q) >= idom.size()) return false;
    if (p == kVirtualRoot) return idom[static_cast<std::size_t>(q)] != kUnreachable;
    return subtree.at(static_cast<std::size_t>(p)).contains(q);
}

DominatorTree compute_dominator_tree(const SignedDigraph& g) {
    const std::size_t n = g.size();
    const std::size_t count = n + 1;  // slot 0 is the virtual root

    std::vector<std::vector<NodeId>> succ(count);
    std::vector<std::vector<NodeId>> pred(count);
    for (NodeId s : g.stubborn_agents()) {
        succ[0].push_back(s);
        pred[static_cast<std::size_t>(s)].push_back(DominatorTree::kVirtualRoot);
    }
    for (const Edge& e : g.edges()) {
        succ[static_cast<std::size_t>(e.from)].push_back(e.to);
        pred[static_cast<std::size_t>(e.to)].push_back(e.from);
    }

    // Iterative DFS postorder from the root.
    std::vector<int> post_number(count, -1);
    std::vector<NodeId> postorder;
    std::vector<bool> visited(count, false);
    std::vector<std::pair<NodeId, std::size_t>> stack{{DominatorTree::kVirtualRoot, 0}};
    visited[0] = true;
    while (!stack.empty()) {
        auto& [node, next] = stack.back();
        const auto& out = succ[static_cast<std::size_t>(node)];
        if (next < out.size()) {
            const NodeId child = out[next++];
            if (!visited[static_cast<std::size_t>(child)]) {
                visited[static_cast<std::size_t>(child)] = true;
                stack.emplace_back(child, 0);
            }
            continue;
        }
        post_number[static_cast<std::size_t>(node)] = static_cast<int>(postorder.size());
        postorder.push_back(node);
        stack.pop_back();
    }

    std::vector<NodeId> idom(count, DominatorTree::kUnreachable);
    idom[0] = DominatorTree::kVirtualRoot;

    const auto intersect = [&](NodeId a, NodeId b) {
        while (a != b) {
            while (post_number[static_cast<std::size_t>(a)] < post_number[static_cast<std::size_t>(b)])
                a = idom[static_cast<std::size_t>(a)];
            while (post_number[static_cast<std::size_t>(b)] < post_number[static_cast<std::size_t>(a)])
                b = idom[static_cast<std::size_t>(b)];
        }
        return a;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = postorder.rbegin(); it != postorder.rend(); ++it) {
            const NodeId b = *it;
            if (b == DominatorTree::kVirtualRoot) continue;
            NodeId candidate = DominatorTree::kUnreachable;
            for (NodeId p : pred[static_cast<std::size_t>(b)]) {
                if (idom[static_cast<std::size_t>(p)] == DominatorTree::kUnreachable) continue;
                candidate = candidate == DominatorTree::kUnreachable ? p : intersect(p, candidate);
            }
            if (idom[static_cast<std::size_t>(b)] != candidate) {
                idom[static_cast<std::size_t>(b)] = candidate;
                changed = true;
            }
        }
    }

    DominatorTree tree;
    tree.idom = std::move(idom);
    tree.subtree.assign(count, {});
    std::vector<std::vector<NodeId>> children(count);
    for (std::size_t v = 1; v < count; ++v) {
        const NodeId parent = tree.idom[v];
        if (parent == DominatorTree::kUnreachable)
            tree.unreachable.push_back(static_cast<NodeId>(v));
        else
            children[static_cast<std::size_t>(parent)].push_back(static_cast<NodeId>(v));
    }
    for (std::size_t v = 1; v < count; ++v) {
        std::vector<NodeId> todo(children[v].begin(), children[v].end());
        while (!todo.empty()) {
            const NodeId u = todo.back();
            todo.pop_back();
            tree.subtree[v].insert(u);
            const auto& next = children[static_cast<std::size_t>(u)];
            todo.insert(todo.end(), next.begin(), next.end());
        }
    }
    return tree;
}

DominatorTree build_dominator_tree(const SignedDigraph& g) {
    if (g.stubborn_count() == 0) throw NoStubbornAgents();
    DominatorTree tree = compute_dominator_tree(g);
    if (!tree.unreachable.empty()) throw UnreachableNodes(tree.unreachable);
    return tree;
}

namespace {

// Post-hoc structural checks shared by both detection routes.
void check_structure(const SignedDigraph& g, LtpCertificate& cert) {
    std::map<NodeId, NodeId> owner;
    for (const auto& [p, members] : cert.persuaded) {
        for (NodeId q : members) {
            if (auto [it, inserted] = owner.emplace(q, p); !inserted)
                cert.violations.push_back(
                    {q, "persuaded by both " + std::to_string(it->second) + " and " + std::to_string(p)});
            if (g.is_stubborn(q)) cert.violations.push_back({q, "stubborn agent in N_" + std::to_string(p)});
            for (NodeId t : g.in_neighbours(q))
                if (t != p && !members.contains(t))
                    cert.violations.push_back({q, "in-neighbour " + std::to_string(t) + " outside N_" +
                                                      std::to_string(p) + " and not " + std::to_string(p)});
        }
    }
}

}  // namespace

LtpCertificate detect_ltp_agents(const SignedDigraph& g, const DominatorTree& tree) {
    if (tree.size() != g.size()) throw DimensionMismatch("dominator tree does not match graph size");
    LtpCertificate cert;
    for (std::size_t v = 1; v < tree.idom.size(); ++v) {
        const auto p = static_cast<NodeId>(v);
        if (tree.idom[v] != DominatorTree::kVirtualRoot || tree.subtree[v].empty()) continue;
        cert.ltp_agents.insert(p);
        cert.persuaded[p] = tree.subtree[v];
    }
    check_structure(g, cert);
    return cert;
}

LtpCertificate analyze(const SignedDigraph& g) {
    return check_conditions(g, detect_ltp_agents(g, build_dominator_tree(g)));
}

LtpCertificate brute_force_ltp_oracle(const SignedDigraph& g) {
    const std::size_t n = g.size();
    if (n > kBruteForceMaxNodes)
        throw SizeLimit("brute-force oracle is limited to " + std::to_string(kBruteForceMaxNodes) + " agents");
    if (g.stubborn_count() == 0) throw NoStubbornAgents();

    using Mask = std::uint32_t;
    const auto bit = [](NodeId id) { return Mask{1} << static_cast<unsigned>(id - 1); };

    // on_every_path[t]: nodes common to every simple path from a stubborn
    // agent that ends at t.
    std::vector<Mask> on_every_path(n, 0);
    std::vector<bool> reached(n, false);

    const auto record = [&](NodeId t, Mask path) {
        const auto slot = static_cast<std::size_t>(t - 1);
        on_every_path[slot] = reached[slot] ? (on_every_path[slot] & path) : path;
        reached[slot] = true;
    };

    for (NodeId s : g.stubborn_agents()) {
        struct Frame {
            NodeId node;
            std::size_t next;
        };
        std::vector<Frame> stack{{s, 0}};
        Mask path = bit(s);
        record(s, path);
        while (!stack.empty()) {
            Frame& top = stack.back();
            const auto& out = g.out_edges(top.node);
            if (top.next == out.size()) {
                path &= ~bit(top.node);
                stack.pop_back();
                continue;
            }
            const NodeId v = g.edges()[out[top.next++]].to;
            if (path & bit(v)) continue;
            path |= bit(v);
            record(v, path);
            stack.push_back({v, 0});
        }
    }

    std::vector<NodeId> unreachable;
    for (std::size_t i = 0; i < n; ++i)
        if (!reached[i]) unreachable.push_back(static_cast<NodeId>(i + 1));
    if (!unreachable.empty()) throw UnreachableNodes(std::move(unreachable));

    LtpCertificate cert;
    for (NodeId p = 1; p <= static_cast<NodeId>(n); ++p) {
        // condition (ii): a non-stubborn p must not have another agent on
        // every path leading to it.
        if (!g.is_stubborn(p) && on_every_path[static_cast<std::size_t>(p - 1)] != bit(p)) continue;
        std::set<NodeId> members;
        for (NodeId q = 1; q <= static_cast<NodeId>(n); ++q) {
            if (q == p || g.is_stubborn(q)) continue;
            if (on_every_path[static_cast<std::size_t>(q - 1)] & bit(p)) members.insert(q);
        }
        if (members.empty()) continue;  // condition (i)
        cert.ltp_agents.insert(p);
        cert.persuaded[p] = std::move(members);
    }
    check_structure(g, cert);
    return cert;
}

LtpCertificate check_conditions(const SignedDigraph& g, LtpCertificate cert) {
    cert.uncovered.clear();
    std::vector<bool> covered(g.size(), false);
    for (NodeId p : cert.ltp_agents) {
        covered[static_cast<std::size_t>(p - 1)] = true;
        for (NodeId q : cert.persuaded.at(p)) covered[static_cast<std::size_t>(q - 1)] = true;
    }
    for (std::size_t i = 0; i < covered.size(); ++i) {
        if (covered[i]) continue;
        const auto id = static_cast<NodeId>(i + 1);
        cert.uncovered.push_back(id);
        cert.violations.push_back(
            {id, g.is_stubborn(id) ? "uncovered: stubborn agent with an empty persuaded set"
                                   : "uncovered: not an LTP agent and not persuaded by one"});
    }
    cert.covered = cert.uncovered.empty();

    cert.cooperative = true;
    for (const auto& [p, members] : cert.persuaded) {
        for (NodeId q : members) {
            for (std::size_t e : g.in_edges(q)) {
                const Edge& edge = g.edges()[e];
                if (edge.weight > 0.0) continue;
                cert.cooperative = false;
                cert.violations.push_back({q, "negative in-edge from " + std::to_string(edge.from) +
                                                  " into persuaded agent of " + std::to_string(p)});
            }
        }
    }
    return cert;
}

Partition canonical(Partition p) {
    std::erase_if(p, [](const auto& c) { return c.empty(); });
    std::sort(p.begin(), p.end(), [](const auto& a, const auto& b) { return *a.begin() < *b.begin(); });
    return p;
}

ClusterPrediction predict_clusters(const LtpCertificate& cert, PredictionMode mode) {
    if (mode == PredictionMode::strict) {
        if (cert.ltp_agents.empty()) throw ConditionsNotMet("no LTP agents detected");
        if (!cert.covered) throw ConditionsNotMet("C1 fails: LTP clusters do not cover every agent");
        if (!cert.cooperative) throw ConditionsNotMet("C2 fails: a persuaded agent has a negative in-edge");
    }

    std::vector<std::pair<std::set<NodeId>, bool>> clusters;
    for (NodeId p : cert.ltp_agents) {
        std::set<NodeId> cluster = cert.persuaded.at(p);
        cluster.insert(p);
        clusters.emplace_back(std::move(cluster), true);
    }
    if (mode == PredictionMode::relaxed)
        for (NodeId u : cert.uncovered) clusters.emplace_back(std::set<NodeId>{u}, false);

    std::sort(clusters.begin(), clusters.end(),
              [](const auto& a, const auto& b) { return *a.first.begin() < *b.first.begin(); });
    ClusterPrediction out;
    for (auto& [cluster, guaranteed] : clusters) {
        out.clusters.push_back(std::move(cluster));
        out.guaranteed.push_back(guaranteed);
    }
    return out;
}

}  // namespace sfj
