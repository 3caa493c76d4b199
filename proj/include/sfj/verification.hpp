#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "sfj/dynamics.hpp"
#include "sfj/ltp.hpp"

namespace sfj {

inline constexpr double kDefaultClusterTolerance = 1e-8;

/// Groups agents whose V-rows agree: i ~ j iff max_h |v_ih - v_jh| <= tau * max|V|.
/// The relation is closed transitively with union-find.
Partition clusters_from_V(const Eigen::MatrixXd& V, double tau = kDefaultClusterTolerance);

/// Largest pairwise max-norm row distance inside `cluster` (ids 1-based).
double cluster_diameter(const Eigen::MatrixXd& V, const std::set<NodeId>& cluster);

/// Groups the final opinions of a converged trace; values closer than
/// tau * max(1, max|x|) chain into one group. Throws NotConverged.
Partition clusters_from_trace(const OpinionTrace& trace, double tau = kDefaultClusterTolerance);

/// True iff every cluster of `fine` lies inside some cluster of `coarse`.
bool refines(const Partition& fine, const Partition& coarse);

struct ClusterReport {
    Partition predicted;
    Partition observed;
    bool match = false;  // predicted refines observed
    double max_within_cluster_spread = 0.0;
    double tolerance = 0.0;
    /// Diameter of each observed cluster, same order as `observed`.
    std::vector<double> observed_diameters;
};

/// Compares a prediction with the V-row grouping. Spread is measured on the
/// rows of V over each predicted cluster.
ClusterReport compare_with_V(const Partition& predicted, const Eigen::MatrixXd& V,
                             double tau = kDefaultClusterTolerance);

/// Same against the final state of a converged trace.
ClusterReport compare_with_trace(const Partition& predicted, const OpinionTrace& trace,
                                 double tau = kDefaultClusterTolerance);

struct RobustnessOptions {
    std::size_t trials = 200;
    std::uint64_t seed = 1;
    double tau = kDefaultClusterTolerance;
    PredictionMode mode = PredictionMode::strict;
    double min_weight = 0.1;
    double max_weight = 10.0;
};

struct RobustnessReport {
    std::size_t trials = 0;
    std::size_t passes = 0;
    double worst_spread = 0.0;
    Partition predicted;
    /// The LTP prediction recomputed on each redrawn graph never changed.
    bool prediction_stable = true;
    std::vector<std::size_t> failed_trials;
};

/// Redraws every edge magnitude uniformly from [min_weight, max_weight]
/// (signs kept) and every stubborn agent's beta uniformly from (0, 1], then
/// checks that clusters_from_V reproduces the LTP partition. Strict mode
/// throws ConditionsNotMet unless C1 and C2 hold; relaxed mode only reports.
RobustnessReport robustness_harness(const SignedDigraph& g, const RobustnessOptions& options = {});

/// One redraw as used by the harness; exposed for tests.
SignedDigraph redraw_weights(const SignedDigraph& g, std::uint64_t seed, double min_weight = 0.1,
                             double max_weight = 10.0);

}  // namespace sfj
