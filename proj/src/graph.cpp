#include "sfj/graph.hpp"

#include <cmath>
#include <queue>
#include <set>
#include <string>
#include <utility>

namespace sfj {

SignedDigraph::SignedDigraph(std::size_t n, std::vector<Edge> edges, std::vector<double> beta,
                             std::vector<double> x0)
    : n_(n), edges_(std::move(edges)), beta_(std::move(beta)), x0_(std::move(x0)), in_(n), out_(n) {
    if (beta_.size() != n_)
        throw ValidationError("beta has " + std::to_string(beta_.size()) + " entries, expected " +
                              std::to_string(n_));
    if (x0_.size() != n_)
        throw ValidationError("x0 has " + std::to_string(x0_.size()) + " entries, expected " +
                              std::to_string(n_));
    for (std::size_t i = 0; i < n_; ++i) {
        if (!std::isfinite(beta_[i]) || beta_[i] < 0.0 || beta_[i] > 1.0)
            throw ValidationError("agent " + std::to_string(i + 1) + ": beta must lie in [0,1]");
        if (!std::isfinite(x0_[i]))
            throw ValidationError("agent " + std::to_string(i + 1) + ": x0 is not finite");
    }

    std::set<std::pair<NodeId, NodeId>> seen;
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const Edge& edge = edges_[e];
        const auto in_range = [&](NodeId id) {
            return id >= 1 && static_cast<std::size_t>(id) <= n_;
        };
        const std::string where = "edge " + std::to_string(edge.from) + "->" + std::to_string(edge.to);
        if (!in_range(edge.from) || !in_range(edge.to))
            throw ValidationError(where + ": node id outside 1.." + std::to_string(n_));
        if (!std::isfinite(edge.weight) || edge.weight == 0.0)
            throw ValidationError(where + ": weight must be finite and nonzero");
        if (!seen.emplace(edge.from, edge.to).second)
            throw ValidationError(where + ": duplicate edge");
        in_[static_cast<std::size_t>(edge.to - 1)].push_back(e);
        out_[static_cast<std::size_t>(edge.from - 1)].push_back(e);
    }
}

std::size_t SignedDigraph::index(NodeId id) const {
    if (id < 1 || static_cast<std::size_t>(id) > n_)
        throw std::out_of_range("node id " + std::to_string(id) + " outside 1.." + std::to_string(n_));
    return static_cast<std::size_t>(id - 1);
}

std::vector<NodeId> SignedDigraph::stubborn_agents() const {
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < n_; ++i)
        if (beta_[i] > 0.0) out.push_back(static_cast<NodeId>(i + 1));
    return out;
}

std::size_t SignedDigraph::stubborn_count() const {
    std::size_t m = 0;
    for (double b : beta_)
        if (b > 0.0) ++m;
    return m;
}

std::vector<NodeId> SignedDigraph::in_neighbours(NodeId id) const {
    std::vector<NodeId> out;
    for (std::size_t e : in_edges(id)) out.push_back(edges_[e].from);
    return out;
}

std::vector<NodeId> SignedDigraph::out_neighbours(NodeId id) const {
    std::vector<NodeId> out;
    for (std::size_t e : out_edges(id)) out.push_back(edges_[e].to);
    return out;
}

SignedDigraph SignedDigraph::with_edges(std::vector<Edge> edges) const {
    return SignedDigraph(n_, std::move(edges), beta_, x0_);
}

SignedDigraph SignedDigraph::with_beta(std::vector<double> beta) const {
    return SignedDigraph(n_, edges_, std::move(beta), x0_);
}

SignedDigraph SignedDigraph::with_x0(std::vector<double> x0) const {
    return SignedDigraph(n_, edges_, beta_, std::move(x0));
}

Eigen::MatrixXd NormalizedSystem::propagation() const {
    return (Eigen::VectorXd::Ones(beta.size()) - beta).asDiagonal() * W;
}

NormalizedSystem normalize(const SignedDigraph& g) {
    const auto n = static_cast<Eigen::Index>(g.size());
    NormalizedSystem sys{Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd(n)};
    for (Eigen::Index i = 0; i < n; ++i) sys.beta(i) = g.beta()[static_cast<std::size_t>(i)];

    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& incoming = g.in_edges(static_cast<NodeId>(i + 1));
        double total = 0.0;
        for (std::size_t e : incoming) total += std::abs(g.edges()[e].weight);
        if (total == 0.0) {
            sys.W(i, i) = 1.0;
            continue;
        }
        for (std::size_t e : incoming) {
            const Edge& edge = g.edges()[e];
            sys.W(i, edge.from - 1) = edge.weight / total;
        }
    }
    return sys;
}

ValidationReport check_assumption1(const SignedDigraph& g) {
    ValidationReport report;
    report.stubborn_count = g.stubborn_count();
    if (report.stubborn_count == 0) throw NoStubbornAgents();

    std::vector<bool> reached(g.size(), false);
    std::queue<NodeId> frontier;
    for (NodeId s : g.stubborn_agents()) {
        reached[static_cast<std::size_t>(s - 1)] = true;
        frontier.push(s);
    }
    while (!frontier.empty()) {
        const NodeId u = frontier.front();
        frontier.pop();
        for (NodeId v : g.out_neighbours(u)) {
            auto&& seen = reached[static_cast<std::size_t>(v - 1)];
            if (!seen) {
                seen = true;
                frontier.push(v);
            }
        }
    }
    for (std::size_t i = 0; i < g.size(); ++i)
        if (!reached[i]) report.unreachable_nonstubborn.push_back(static_cast<NodeId>(i + 1));
    report.assumption1_holds = report.unreachable_nonstubborn.empty();
    return report;
}

void require_assumption1(const SignedDigraph& g) {
    auto report = check_assumption1(g);
    if (!report.assumption1_holds) throw UnreachableNodes(std::move(report.unreachable_nonstubborn));
}

Eigen::MatrixXd abs_graph(const Eigen::MatrixXd& m) { return m.cwiseAbs(); }

}  // namespace sfj
