#pragma once

#include <cstddef>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "sfj/graph.hpp"

namespace sfj {

struct OpinionTrace {
    std::vector<Eigen::VectorXd> states;  // states[0] = x(0)
    bool converged = false;
    std::size_t iterations = 0;
    double residual = 0.0;  // infinity norm of the last step

    const Eigen::VectorXd& final_state() const { return states.back(); }
};

class NotConverged : public Error {
public:
    explicit NotConverged(OpinionTrace partial);
    const OpinionTrace& trace() const noexcept { return trace_; }

private:
    OpinionTrace trace_;
};

struct SimulationOptions {
    double tolerance = 1e-10;
    std::size_t max_iter = 1'000'000;
    /// When false only x(0) and the last state are kept.
    bool keep_states = true;
};

/// One SFJ update: (I - beta) W x + beta x0.
Eigen::VectorXd sfj_step(const Eigen::MatrixXd& W, const Eigen::VectorXd& beta, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& x0);

/// Iterates the SFJ update from g.x0().
///
/// Stops once the step ||x(k+1) - x(k)||_inf drops below the tolerance and
/// the geometric tail estimate step * r / (1 - r) does too, where r is the
/// largest step ratio over a short trailing window. The second test keeps
/// the reported limit within the tolerance of the true fixed point when the
/// contraction is slow. A step below the tolerance that has reached the
/// round-off floor (a few ulps of ||x||_inf) also counts as converged.
/// Throws NotConverged with the partial trace.
OpinionTrace simulate(const SignedDigraph& g, const SimulationOptions& options = {});

/// rho(M). Power iteration from a fixed-seed start vector; falls back to a
/// full eigen-decomposition for n <= kEigenFallbackMaxSize when the
/// iteration does not settle (complex or tied dominant eigenvalues).
inline constexpr Eigen::Index kEigenFallbackMaxSize = 64;
double spectral_radius(const Eigen::MatrixXd& m, double tol = 1e-12, std::size_t max_iter = 20'000);

struct InfluenceMatrix {
    Eigen::MatrixXd V;
};

/// V = (I - (I - beta) W)^{-1} beta via an LU solve with n right-hand sides.
/// Throws SingularSystem if some agent is unreachable from every stubborn agent
/// or the system is singular.
InfluenceMatrix influence_matrix(const SignedDigraph& g);

/// Truncated series sum_{k=0}^{K} ((I - beta) W)^k beta.
InfluenceMatrix neumann_oracle(const SignedDigraph& g, std::size_t depth);

/// Smallest K with rate^{K+1} / (1 - rate) <= target. `rate` must be in [0,1).
/// Only an asymptotic estimate: transient growth of ||M^k|| can leave a
/// larger error when rate is close to 1. Use neumann_certified for a bound.
std::size_t neumann_depth(double rate, double target);

struct CertifiedSeries {
    Eigen::MatrixXd V;
    std::size_t terms = 0;    // K, the number of summed powers
    double tail_bound = 0.0;  // entrywise bound on |V_true - V|
};

/// sum_{k<K} M^k beta with K doubled until the tail bound drops below
/// `target`. Since |M^k beta| <= |M|^k beta entrywise and ||abs(M)^j||_inf
/// is nonincreasing, the tail is at most max(beta) K d / (1 - d) with
/// d = ||abs(M)^K||_inf. Throws SingularSystem if d never drops below 1.
CertifiedSeries neumann_certified(const SignedDigraph& g, double target);

/// Stacked steady-state system R y = 0 with y = [x*; x_s(0)].
///
/// Rows and columns 0..n-1 are agents in `order` (stubborn agents first,
/// each group in ascending id); rows and columns n..n+m-1 belong to the
/// initial opinions of `stubborn_index`. All ids are the caller's ids.
struct SteadyStateSystem {
    Eigen::MatrixXd R;
    Eigen::VectorXd y;
    std::vector<NodeId> order;
    std::vector<NodeId> stubborn_index;

    std::size_t agent_count() const noexcept { return order.size(); }
    Eigen::Index position(NodeId id) const;
    Eigen::Index source_position(NodeId stubborn_id) const;
};

SteadyStateSystem build_R(const SignedDigraph& g);

/// Rows/columns of `m` selected by `alpha`, in the given order.
Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& rows,
                          const std::vector<Eigen::Index>& cols);

/// M[alpha] - M[alpha, alpha^c] M[alpha^c]^{-1} M[alpha^c, alpha], rows and
/// columns ordered as in `alpha`. Throws SingularBlock.
Eigen::MatrixXd schur_complement(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& alpha);

/// Block elimination of M z = b onto the alpha variables:
/// (M/alpha^c) z[alpha] = b[alpha] - M[alpha, alpha^c] M[alpha^c]^{-1} b[alpha^c].
Eigen::VectorXd solve_reduced(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& alpha,
                              const Eigen::VectorXd& b);

struct SteadyStateReduction {
    std::vector<Eigen::Index> alpha;  // kept positions of R, ascending
    Eigen::MatrixXd reduced;          // R / alpha^c
    double block_radius = 0.0;        // rho(W[alpha^c]); 0 when alpha^c is empty
    double entry_p = 0.0;             // q-row entry at column p
    double entry_q = 0.0;             // q-row entry at column q
    double off_support = 0.0;         // largest |entry| of the q-row elsewhere
    double row_sum = 0.0;
    bool support_ok = false;          // nonzeros exactly at {p, q}
    bool relation_holds = false;      // support_ok and |row_sum| <= tolerance
    Eigen::VectorXd reduced_solution; // y[alpha] from the reduced system
    double solution_error = 0.0;      // vs. the full solve stored in sys.y
};

/// Eliminates alpha^c = N_p \ {q} from the steady-state system and checks
/// that the q-row of R / alpha^c is supported on {p, q} with zero row-sum,
/// which forces x*_p = x*_q. Throws HypothesisViolated when a node of N_p
/// has a negative in-edge and SingularBlock when rho(W[alpha^c]) >= 1.
SteadyStateReduction reduce_steady_state(const SteadyStateSystem& sys, NodeId p, NodeId q,
                                         const std::set<NodeId>& persuaded, double tolerance = 1e-10);

}  // namespace sfj
