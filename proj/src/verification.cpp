#include "sfj/verification.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>

namespace sfj {

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t i) {
        while (parent_[i] != i) {
            parent_[i] = parent_[parent_[i]];
            i = parent_[i];
        }
        return i;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

Partition groups(DisjointSets& sets, std::size_t n) {
    std::vector<std::set<NodeId>> by_root(n);
    for (std::size_t i = 0; i < n; ++i) by_root[sets.find(i)].insert(static_cast<NodeId>(i + 1));
    return canonical(std::move(by_root));
}

double spread_over(const Partition& clusters, const Eigen::MatrixXd& V) {
    double worst = 0.0;
    for (const auto& c : clusters) worst = std::max(worst, cluster_diameter(V, c));
    return worst;
}

}  // namespace

Partition clusters_from_V(const Eigen::MatrixXd& V, double tau) {
    const auto n = static_cast<std::size_t>(V.rows());
    const double scale = V.size() == 0 ? 0.0 : V.cwiseAbs().maxCoeff();
    const double threshold = tau * (scale > 0.0 ? scale : 1.0);
    DisjointSets sets(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double gap = (V.row(static_cast<Eigen::Index>(i)) - V.row(static_cast<Eigen::Index>(j)))
                                   .lpNorm<Eigen::Infinity>();
            if (gap <= threshold) sets.unite(i, j);
        }
    return groups(sets, n);
}

double cluster_diameter(const Eigen::MatrixXd& V, const std::set<NodeId>& cluster) {
    double diameter = 0.0;
    for (auto a = cluster.begin(); a != cluster.end(); ++a)
        for (auto b = std::next(a); b != cluster.end(); ++b)
            diameter = std::max(diameter, (V.row(*a - 1) - V.row(*b - 1)).lpNorm<Eigen::Infinity>());
    return diameter;
}

Partition clusters_from_trace(const OpinionTrace& trace, double tau) {
    if (!trace.converged) throw NotConverged(trace);
    const Eigen::VectorXd& x = trace.final_state();
    const auto n = static_cast<std::size_t>(x.size());
    const double threshold = tau * std::max(1.0, x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff());

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return x(static_cast<Eigen::Index>(a)) < x(static_cast<Eigen::Index>(b));
    });
    // On a line the transitive closure of "within threshold" is a split at
    // every gap larger than the threshold.
    DisjointSets sets(n);
    for (std::size_t k = 1; k < n; ++k)
        if (x(static_cast<Eigen::Index>(idx[k])) - x(static_cast<Eigen::Index>(idx[k - 1])) <= threshold)
            sets.unite(idx[k], idx[k - 1]);
    return groups(sets, n);
}

bool refines(const Partition& fine, const Partition& coarse) {
    return std::all_of(fine.begin(), fine.end(), [&](const std::set<NodeId>& f) {
        return std::any_of(coarse.begin(), coarse.end(), [&](const std::set<NodeId>& c) {
            return std::includes(c.begin(), c.end(), f.begin(), f.end());
        });
    });
}

ClusterReport compare_with_V(const Partition& predicted, const Eigen::MatrixXd& V, double tau) {
    ClusterReport report;
    report.predicted = canonical(predicted);
    report.observed = clusters_from_V(V, tau);
    report.match = refines(report.predicted, report.observed);
    report.max_within_cluster_spread = spread_over(report.predicted, V);
    report.tolerance = tau;
    for (const auto& c : report.observed) report.observed_diameters.push_back(cluster_diameter(V, c));
    return report;
}

ClusterReport compare_with_trace(const Partition& predicted, const OpinionTrace& trace, double tau) {
    ClusterReport report;
    report.predicted = canonical(predicted);
    report.observed = clusters_from_trace(trace, tau);
    report.match = refines(report.predicted, report.observed);
    const Eigen::MatrixXd column = trace.final_state();
    report.max_within_cluster_spread = spread_over(report.predicted, column);
    report.tolerance = tau;
    for (const auto& c : report.observed) report.observed_diameters.push_back(cluster_diameter(column, c));
    return report;
}

SignedDigraph redraw_weights(const SignedDigraph& g, std::uint64_t seed, double min_weight, double max_weight) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> magnitude(min_weight, max_weight);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<Edge> edges = g.edges();
    for (Edge& e : edges) e.weight = std::copysign(magnitude(rng), e.weight);
    std::vector<double> beta = g.beta();
    for (double& b : beta)
        if (b > 0.0) b = 1.0 - unit(rng);  // (0, 1]
    return SignedDigraph(g.size(), std::move(edges), std::move(beta), g.x0());
}

RobustnessReport robustness_harness(const SignedDigraph& g, const RobustnessOptions& options) {
    const LtpCertificate cert = analyze(g);
    RobustnessReport report;
    report.predicted = predict_clusters(cert, options.mode).clusters;
    report.trials = options.trials;

    for (std::size_t trial = 0; trial < options.trials; ++trial) {
        std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                          static_cast<std::uint32_t>(trial)};
        std::array<std::uint32_t, 2> words{};
        seq.generate(words.begin(), words.end());
        const std::uint64_t trial_seed = (std::uint64_t{words[0]} << 32) | words[1];
        const SignedDigraph drawn = redraw_weights(g, trial_seed, options.min_weight, options.max_weight);

        if (!analyze(drawn).same_membership(cert)) report.prediction_stable = false;
        const Eigen::MatrixXd V = influence_matrix(drawn).V;
        report.worst_spread = std::max(report.worst_spread, spread_over(report.predicted, V));
        if (clusters_from_V(V, options.tau) == report.predicted)
            ++report.passes;
        else
            report.failed_trials.push_back(trial);
    }
    return report;
}

}  // namespace sfj
