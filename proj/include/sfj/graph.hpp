#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "sfj/errors.hpp"

namespace sfj {

/// Directed signed edge. `from` is an in-neighbour of `to`; the weight enters
/// row `to` of the normalized matrix.
struct Edge {
    NodeId from = 0;
    NodeId to = 0;
    double weight = 0.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Signed, weighted digraph with per-agent stubbornness and initial opinion.
///
/// Ids are 1-based. Matrix and vector positions are `id - 1`. The constructor
/// enforces the invariants (ids in range, no duplicate or zero-weight edges,
/// beta in [0,1], finite values) and throws ValidationError otherwise.
/// Instances are immutable.
class SignedDigraph {
public:
    SignedDigraph(std::size_t n, std::vector<Edge> edges, std::vector<double> beta,
                  std::vector<double> x0);

    std::size_t size() const noexcept { return n_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<double>& beta() const noexcept { return beta_; }
    const std::vector<double>& x0() const noexcept { return x0_; }

    double beta(NodeId id) const { return beta_.at(index(id)); }
    bool is_stubborn(NodeId id) const { return beta(id) > 0.0; }
    std::vector<NodeId> stubborn_agents() const;
    std::size_t stubborn_count() const;

    /// Indices into edges() of the edges entering / leaving `id`.
    const std::vector<std::size_t>& in_edges(NodeId id) const { return in_.at(index(id)); }
    const std::vector<std::size_t>& out_edges(NodeId id) const { return out_.at(index(id)); }

    std::vector<NodeId> in_neighbours(NodeId id) const;
    std::vector<NodeId> out_neighbours(NodeId id) const;

    /// Copies with one part replaced; the result is validated again.
    SignedDigraph with_edges(std::vector<Edge> edges) const;
    SignedDigraph with_beta(std::vector<double> beta) const;
    SignedDigraph with_x0(std::vector<double> x0) const;

    friend bool operator==(const SignedDigraph&, const SignedDigraph&) = default;

private:
    std::size_t index(NodeId id) const;

    std::size_t n_;
    std::vector<Edge> edges_;
    std::vector<double> beta_;
    std::vector<double> x0_;
    std::vector<std::vector<std::size_t>> in_;
    std::vector<std::vector<std::size_t>> out_;
};

/// Normalized signed weight matrix W and the stubbornness diagonal.
struct NormalizedSystem {
    Eigen::MatrixXd W;
    Eigen::VectorXd beta;

    /// (I - beta) W, the iteration matrix of the SFJ update.
    Eigen::MatrixXd propagation() const;
};

struct ValidationReport {
    bool assumption1_holds = false;
    std::vector<NodeId> unreachable_nonstubborn;
    std::size_t stubborn_count = 0;
};

/// Row i holds a_ij / sum_j |a_ij| over the in-edges of i. Rows with no
/// in-edges get the self-loop fallback w_ii = 1.
NormalizedSystem normalize(const SignedDigraph& g);

/// Reachability of every non-stubborn agent from the stubborn set, signs
/// ignored. Throws NoStubbornAgents when m = 0.
ValidationReport check_assumption1(const SignedDigraph& g);

/// Throws NoStubbornAgents or UnreachableNodes unless every non-stubborn
/// agent is reachable from a stubborn one.
void require_assumption1(const SignedDigraph& g);

/// Entrywise absolute value.
Eigen::MatrixXd abs_graph(const Eigen::MatrixXd& m);

}  // namespace sfj
