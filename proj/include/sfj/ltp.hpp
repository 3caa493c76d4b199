#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "sfj/graph.hpp"

namespace sfj {

/// Dominator tree of the unsigned topology, rooted at a virtual node with
/// an edge to every stubborn agent. Node p dominates q iff every path from
/// every stubborn agent to q traverses p.
struct DominatorTree {
    static constexpr NodeId kVirtualRoot = 0;
    static constexpr NodeId kUnreachable = -1;

    /// idom[id] for id in 1..n; idom[0] is the root itself.
    std::vector<NodeId> idom;
    /// subtree[id]: nodes strictly dominated by id.
    std::vector<std::set<NodeId>> subtree;
    std::vector<NodeId> unreachable;

    std::size_t size() const noexcept { return idom.empty() ? 0 : idom.size() - 1; }
    bool dominates(NodeId p, NodeId q) const;
};

/// Computes the tree without rejecting unreachable nodes; they get
/// idom = kUnreachable and are listed in `unreachable`.
DominatorTree compute_dominator_tree(const SignedDigraph& g);

/// Throws NoStubbornAgents or UnreachableNodes when some agent is unreachable from every stubborn agent.
DominatorTree build_dominator_tree(const SignedDigraph& g);

struct Violation {
    NodeId node = 0;
    std::string reason;

    friend bool operator==(const Violation&, const Violation&) = default;
};

struct LtpCertificate {
    std::set<NodeId> ltp_agents;
    std::map<NodeId, std::set<NodeId>> persuaded;
    /// C1: the LTP agents and their persuaded sets cover every agent.
    bool covered = false;
    /// C2: every in-edge of every persuaded agent is positive.
    bool cooperative = false;
    std::vector<NodeId> uncovered;
    std::vector<Violation> violations;

    std::size_t cluster_count() const noexcept { return ltp_agents.size(); }

    /// Same agents and persuaded sets; condition flags are not compared.
    bool same_membership(const LtpCertificate& other) const {
        return ltp_agents == other.ltp_agents && persuaded == other.persuaded;
    }
};

/// p is LTP iff idom(p) is the virtual root and p strictly dominates at
/// least one node. N_p is the dominated set. Disjointness of the persuaded
/// sets and in-neighbour confinement are checked post hoc; failures show up
/// in `violations`.
LtpCertificate detect_ltp_agents(const SignedDigraph& g, const DominatorTree& tree);

/// Shorthand for detection followed by check_conditions.
LtpCertificate analyze(const SignedDigraph& g);

inline constexpr std::size_t kBruteForceMaxNodes = 12;

/// Literal evaluation of the LTP definition by enumerating every simple
/// path from every stubborn agent. Exponential; throws SizeLimit above
/// kBruteForceMaxNodes agents.
LtpCertificate brute_force_ltp_oracle(const SignedDigraph& g);

/// Fills `covered`, `cooperative`, `uncovered` and appends a violation for
/// every uncovered agent and every negative in-edge into a persuaded agent.
/// Negative in-edges into LTP agents themselves are allowed.
LtpCertificate check_conditions(const SignedDigraph& g, LtpCertificate cert);

enum class PredictionMode { strict, relaxed };

using Partition = std::vector<std::set<NodeId>>;

/// Orders clusters by their smallest member.
Partition canonical(Partition p);

struct ClusterPrediction {
    Partition clusters;
    /// guaranteed[k] is false for the singleton clusters relaxed mode adds.
    std::vector<bool> guaranteed;
};

/// One cluster {p} + N_p per LTP agent. Strict mode throws ConditionsNotMet
/// unless C1 and C2 hold and L is non-empty; relaxed mode appends a flagged
/// singleton for every uncovered agent so the result is a partition.
ClusterPrediction predict_clusters(const LtpCertificate& cert, PredictionMode mode);

}  // namespace sfj
