#include "sfj/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <string>
#include <utility>

namespace sfj {

namespace {

constexpr std::size_t kRatioWindow = 16;
constexpr double kRoundoffSteps = 16.0;
constexpr std::uint64_t kPowerIterationSeed = 0x9E3779B97F4A7C15ULL;

Eigen::VectorXd to_vector(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<Eigen::Index> complement(const std::vector<Eigen::Index>& alpha, Eigen::Index size) {
    std::vector<bool> kept(static_cast<std::size_t>(size), false);
    for (Eigen::Index i : alpha) {
        if (i < 0 || i >= size) throw DimensionMismatch("index set entry out of range");
        kept[static_cast<std::size_t>(i)] = true;
    }
    std::vector<Eigen::Index> rest;
    for (Eigen::Index i = 0; i < size; ++i)
        if (!kept[static_cast<std::size_t>(i)]) rest.push_back(i);
    return rest;
}

}  // namespace

NotConverged::NotConverged(OpinionTrace partial)
    : Error("SFJ iteration did not converge after " + std::to_string(partial.iterations) +
            " iterations (last step " + std::to_string(partial.residual) + ")"),
      trace_(std::move(partial)) {}

Eigen::VectorXd sfj_step(const Eigen::MatrixXd& W, const Eigen::VectorXd& beta, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& x0) {
    const Eigen::Index n = W.rows();
    if (W.cols() != n || beta.size() != n || x.size() != n || x0.size() != n)
        throw DimensionMismatch("sfj_step: W, beta, x and x0 must agree in dimension");
    return (Eigen::VectorXd::Ones(n) - beta).cwiseProduct(W * x) + beta.cwiseProduct(x0);
}

OpinionTrace simulate(const SignedDigraph& g, const SimulationOptions& options) {
    require_assumption1(g);
    const NormalizedSystem sys = normalize(g);
    const Eigen::MatrixXd M = sys.propagation();
    const Eigen::VectorXd x0 = to_vector(g.x0());
    const Eigen::VectorXd anchor = sys.beta.cwiseProduct(x0);

    OpinionTrace trace;
    trace.states.push_back(x0);
    Eigen::VectorXd x = x0;
    std::deque<double> ratios;
    double previous_step = 0.0;

    for (std::size_t k = 1; k <= options.max_iter; ++k) {
        Eigen::VectorXd next = M * x + anchor;
        const double step = (next - x).lpNorm<Eigen::Infinity>();
        x = std::move(next);
        if (options.keep_states || k == 1) trace.states.push_back(x);
        else trace.states.back() = x;
        trace.iterations = k;
        trace.residual = step;

        if (k > 1 && previous_step > 0.0) {
            ratios.push_back(step / previous_step);
            if (ratios.size() > kRatioWindow) ratios.pop_front();
        }
        previous_step = step;

        if (step == 0.0) {
            trace.converged = true;
            break;
        }
        // Steps at round-off level cycle with ratios near 1; the iterate
        // cannot get any closer to the fixed point.
        if (step < options.tolerance &&
            step <= kRoundoffSteps * std::numeric_limits<double>::epsilon() * std::max(1.0, x.lpNorm<Eigen::Infinity>())) {
            trace.converged = true;
            break;
        }
        if (step < options.tolerance && ratios.size() >= 2) {
            const double rate = *std::max_element(ratios.begin(), ratios.end());
            if (rate < 1.0 && step * rate / (1.0 - rate) < options.tolerance) {
                trace.converged = true;
                break;
            }
        }
    }
    if (!trace.converged) throw NotConverged(std::move(trace));
    return trace;
}

double spectral_radius(const Eigen::MatrixXd& m, double tol, std::size_t max_iter) {
    if (m.rows() != m.cols()) throw DimensionMismatch("spectral_radius: matrix must be square");
    const Eigen::Index n = m.rows();
    if (n == 0) return 0.0;

    std::mt19937_64 rng(kPowerIterationSeed);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = uniform(rng);
    v.normalize();

    double estimate = 0.0;
    for (std::size_t k = 0; k < max_iter; ++k) {
        const Eigen::VectorXd w = m * v;
        const double norm = w.norm();
        if (norm < 1e-280) return 0.0;  // the iterate died out: m is nilpotent on the start vector
        const double rayleigh = v.dot(w);
        estimate = norm;
        if ((w - rayleigh * v).norm() <= tol * norm) return std::abs(rayleigh);
        v = w / norm;
    }

    if (n <= kEigenFallbackMaxSize) {
        Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
        if (solver.info() == Eigen::Success) return solver.eigenvalues().cwiseAbs().maxCoeff();
    }
    throw SpectralRadiusNotConverged(estimate, abs_graph(m).rowwise().sum().maxCoeff());
}

InfluenceMatrix influence_matrix(const SignedDigraph& g) {
    const ValidationReport report = check_assumption1(g);
    if (!report.assumption1_holds)
        throw SingularSystem("I - (I - beta) W is not invertible: some agent has no path from a stubborn agent");
    const NormalizedSystem sys = normalize(g);
    const auto n = static_cast<Eigen::Index>(g.size());
    const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - sys.propagation();
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible()) throw SingularSystem("I - (I - beta) W is singular");
    return {lu.solve(Eigen::MatrixXd(sys.beta.asDiagonal()))};
}

InfluenceMatrix neumann_oracle(const SignedDigraph& g, std::size_t depth) {
    const NormalizedSystem sys = normalize(g);
    const Eigen::MatrixXd M = sys.propagation();
    Eigen::MatrixXd term = sys.beta.asDiagonal();
    Eigen::MatrixXd sum = term;
    for (std::size_t k = 1; k <= depth; ++k) {
        term = M * term;
        sum += term;
    }
    return {sum};
}

std::size_t neumann_depth(double rate, double target) {
    if (!(rate >= 0.0 && rate < 1.0)) throw Error("neumann_depth: rate must lie in [0,1)");
    if (rate == 0.0) return 0;
    const double power = std::log(target * (1.0 - rate)) / std::log(rate);  // needed K + 1
    return power <= 1.0 ? 0 : static_cast<std::size_t>(std::ceil(power)) - 1;
}

CertifiedSeries neumann_certified(const SignedDigraph& g, double target) {
    if (!(target > 0.0)) throw Error("neumann_certified: target must be positive");
    const NormalizedSystem sys = normalize(g);
    const double beta_max = sys.beta.size() == 0 ? 0.0 : sys.beta.maxCoeff();
    Eigen::MatrixXd power = sys.propagation();
    Eigen::MatrixXd abs_power = power.cwiseAbs();
    CertifiedSeries out;
    out.V = sys.beta.asDiagonal();
    out.terms = 1;
    // S_2K = S_K + M^K S_K.
    for (int doubling = 0; doubling < 62; ++doubling) {
        const double d = abs_power.rowwise().sum().maxCoeff();
        if (d < 1.0) {
            out.tail_bound = beta_max * static_cast<double>(out.terms) * d / (1.0 - d);
            if (out.tail_bound <= target) return out;
        }
        out.V += power * out.V;
        power = power * power;
        abs_power = abs_power * abs_power;
        out.terms *= 2;
    }
    throw SingularSystem("Neumann series does not contract");
}

Eigen::Index SteadyStateSystem::position(NodeId id) const {
    const auto it = std::find(order.begin(), order.end(), id);
    if (it == order.end()) throw std::out_of_range("unknown agent " + std::to_string(id));
    return static_cast<Eigen::Index>(it - order.begin());
}

Eigen::Index SteadyStateSystem::source_position(NodeId stubborn_id) const {
    const auto it = std::find(stubborn_index.begin(), stubborn_index.end(), stubborn_id);
    if (it == stubborn_index.end()) throw std::out_of_range("agent " + std::to_string(stubborn_id) + " is not stubborn");
    return static_cast<Eigen::Index>(order.size()) + static_cast<Eigen::Index>(it - stubborn_index.begin());
}

SteadyStateSystem build_R(const SignedDigraph& g) {
    if (g.stubborn_count() == 0) throw NoStubbornAgents();
    SteadyStateSystem sys;
    sys.stubborn_index = g.stubborn_agents();
    sys.order = sys.stubborn_index;
    for (NodeId id = 1; id <= static_cast<NodeId>(g.size()); ++id)
        if (!g.is_stubborn(id)) sys.order.push_back(id);

    const auto n = static_cast<Eigen::Index>(g.size());
    const auto m = static_cast<Eigen::Index>(sys.stubborn_index.size());
    const NormalizedSystem normalized = normalize(g);
    const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - normalized.propagation();

    sys.R = Eigen::MatrixXd::Zero(n + m, n + m);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b) sys.R(a, b) = A(sys.order[static_cast<std::size_t>(a)] - 1, sys.order[static_cast<std::size_t>(b)] - 1);
    for (Eigen::Index j = 0; j < m; ++j) {
        const NodeId s = sys.stubborn_index[static_cast<std::size_t>(j)];
        sys.R(sys.position(s), n + j) = -g.beta(s);
    }

    const Eigen::VectorXd x_star = influence_matrix(g).V * to_vector(g.x0());
    sys.y.resize(n + m);
    for (Eigen::Index a = 0; a < n; ++a) sys.y(a) = x_star(sys.order[static_cast<std::size_t>(a)] - 1);
    for (Eigen::Index j = 0; j < m; ++j) sys.y(n + j) = g.x0()[static_cast<std::size_t>(sys.stubborn_index[static_cast<std::size_t>(j)] - 1)];
    return sys;
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& rows,
                          const std::vector<Eigen::Index>& cols) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(rows[i], cols[j]);
    return out;
}

Eigen::MatrixXd schur_complement(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& alpha) {
    if (m.rows() != m.cols()) throw DimensionMismatch("schur_complement: matrix must be square");
    const std::vector<Eigen::Index> rest = complement(alpha, m.rows());
    const Eigen::MatrixXd kept = submatrix(m, alpha, alpha);
    if (rest.empty()) return kept;
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(submatrix(m, rest, rest));
    if (!lu.isInvertible()) throw SingularBlock("M[alpha^c] is singular");
    return kept - submatrix(m, alpha, rest) * lu.solve(submatrix(m, rest, alpha));
}

Eigen::VectorXd solve_reduced(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& alpha,
                              const Eigen::VectorXd& b) {
    if (b.size() != m.rows()) throw DimensionMismatch("solve_reduced: right-hand side size mismatch");
    const std::vector<Eigen::Index> rest = complement(alpha, m.rows());
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(alpha.size()));
    for (std::size_t i = 0; i < alpha.size(); ++i) rhs(static_cast<Eigen::Index>(i)) = b(alpha[i]);
    if (!rest.empty()) {
        Eigen::VectorXd b_rest(static_cast<Eigen::Index>(rest.size()));
        for (std::size_t i = 0; i < rest.size(); ++i) b_rest(static_cast<Eigen::Index>(i)) = b(rest[i]);
        const Eigen::FullPivLU<Eigen::MatrixXd> lu(submatrix(m, rest, rest));
        if (!lu.isInvertible()) throw SingularBlock("M[alpha^c] is singular");
        rhs -= submatrix(m, alpha, rest) * lu.solve(b_rest);
    }
    const Eigen::FullPivLU<Eigen::MatrixXd> reduced(schur_complement(m, alpha));
    if (!reduced.isInvertible()) throw SingularBlock("reduced system is singular");
    return reduced.solve(rhs);
}

SteadyStateReduction reduce_steady_state(const SteadyStateSystem& sys, NodeId p, NodeId q,
                                         const std::set<NodeId>& persuaded, double tolerance) {
    if (!persuaded.contains(q)) throw HypothesisViolated("q is not in the persuaded set");
    if (persuaded.contains(p)) throw HypothesisViolated("the LTP agent cannot persuade itself");

    const auto n = static_cast<Eigen::Index>(sys.agent_count());
    const Eigen::Index size = sys.R.rows();
    const auto is_stubborn = [&](NodeId id) {
        return std::find(sys.stubborn_index.begin(), sys.stubborn_index.end(), id) != sys.stubborn_index.end();
    };

    // Agents of N_p are non-stubborn, so their R-row is e_r - W-row.
    for (NodeId member : persuaded) {
        if (is_stubborn(member))
            throw HypothesisViolated("agent " + std::to_string(member) + " in N_p is stubborn");
        const Eigen::Index r = sys.position(member);
        for (Eigen::Index c = 0; c < n; ++c) {
            const double weight = c == r ? 1.0 - sys.R(r, r) : -sys.R(r, c);
            if (weight < 0.0)
                throw HypothesisViolated("agent " + std::to_string(member) + " has a negative in-edge from " +
                                         std::to_string(sys.order[static_cast<std::size_t>(c)]));
        }
    }

    std::vector<Eigen::Index> eliminated;
    for (NodeId member : persuaded)
        if (member != q) eliminated.push_back(sys.position(member));
    std::sort(eliminated.begin(), eliminated.end());

    SteadyStateReduction out;
    out.alpha = complement(eliminated, size);

    if (!eliminated.empty()) {
        const Eigen::MatrixXd block =
            Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(eliminated.size()),
                                      static_cast<Eigen::Index>(eliminated.size())) -
            submatrix(sys.R, eliminated, eliminated);
        out.block_radius = spectral_radius(block);
        if (out.block_radius >= 1.0) throw SingularBlock("rho(W[alpha^c]) >= 1; N_p is not reachable from a stubborn agent");
    }
    out.reduced = schur_complement(sys.R, out.alpha);

    const auto column_of = [&](Eigen::Index position) {
        return static_cast<Eigen::Index>(std::find(out.alpha.begin(), out.alpha.end(), position) - out.alpha.begin());
    };
    const Eigen::Index kp = column_of(sys.position(p));
    const Eigen::Index kq = column_of(sys.position(q));
    const Eigen::VectorXd row = out.reduced.row(kq);
    out.entry_p = row(kp);
    out.entry_q = row(kq);
    out.row_sum = row.sum();
    for (Eigen::Index k = 0; k < row.size(); ++k)
        if (k != kp && k != kq) out.off_support = std::max(out.off_support, std::abs(row(k)));
    out.support_ok = std::abs(out.entry_p) > tolerance && std::abs(out.entry_q) > tolerance &&
                     out.off_support <= tolerance;
    out.relation_holds = out.support_ok && std::abs(out.row_sum) <= tolerance;

    // The last m rows of R are zero; pinning them to x_s(0) makes the
    // stacked system nonsingular so the reduced block can be solved.
    Eigen::MatrixXd pinned = sys.R;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(size);
    for (Eigen::Index j = n; j < size; ++j) {
        pinned(j, j) = 1.0;
        rhs(j) = sys.y(j);
    }
    out.reduced_solution = solve_reduced(pinned, out.alpha, rhs);
    for (std::size_t k = 0; k < out.alpha.size(); ++k)
        out.solution_error = std::max(out.solution_error,
                                      std::abs(out.reduced_solution(static_cast<Eigen::Index>(k)) - sys.y(out.alpha[k])));
    return out;
}

}  // namespace sfj
