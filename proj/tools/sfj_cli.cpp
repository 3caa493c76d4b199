// sfj: analyze signed influence networks for LTP agents and multiconsensus.
//
// Exit codes: 0 success, 1 usage, 2 parse/validation, 3 conditions not met,
// 4 not converged.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "sfj/dynamics.hpp"
#include "sfj/generator.hpp"
#include "sfj/graph_io.hpp"
#include "sfj/ltp.hpp"
#include "sfj/serialize.hpp"
#include "sfj/verification.hpp"

namespace {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kInvalidInput = 2,
    kConditionsNotMet = 3,
    kNotConverged = 4,
};

struct RunConfig {
    double tolerance = 1e-10;
    std::size_t max_iter = 1'000'000;
    double tau = sfj::kDefaultClusterTolerance;
    std::size_t trials = 200;
    std::uint64_t seed = 1;
    std::string mode = "strict";
    std::string out;
};

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw sfj::Error("cannot write " + path);
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }
    bool to_file() const { return file_ != nullptr; }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::uint64_t effective_seed(std::uint64_t flag) {
    if (const char* env = std::getenv("SFJ_SEED"); env != nullptr && *env != '\0') {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw CLI::ValidationError("SFJ_SEED", std::string("not an unsigned integer: ") + env);
        }
    }
    return flag;
}

// x0 uniform on [0,10] and stubborn beta uniform on (0,1].
sfj::SignedDigraph randomize_setup(const sfj::SignedDigraph& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> x0(g.size());
    for (double& x : x0) x = 10.0 * unit(rng);
    std::vector<double> beta = g.beta();
    for (double& b : beta)
        if (b > 0.0) b = 1.0 - unit(rng);
    return sfj::SignedDigraph(g.size(), g.edges(), std::move(beta), std::move(x0));
}

int cmd_analyze(const std::string& path, const RunConfig& cfg) {
    const sfj::SignedDigraph g = sfj::load_graph(path);
    const sfj::LtpCertificate cert = sfj::analyze(g);
    Output out(cfg.out);
    out.stream() << sfj::to_json(cert).dump(2) << '\n';
    return kOk;
}

int cmd_predict(const std::string& path, const RunConfig& cfg) {
    const sfj::SignedDigraph g = sfj::load_graph(path);
    const sfj::PredictionMode mode = sfj::parse_mode(cfg.mode);
    const sfj::ClusterPrediction prediction = sfj::predict_clusters(sfj::analyze(g), mode);
    Output out(cfg.out);
    out.stream() << sfj::to_json(prediction, mode).dump(2) << '\n';
    return kOk;
}

int cmd_simulate(const std::string& path, const RunConfig& cfg, bool randomize, const std::string& influence_path) {
    sfj::SignedDigraph g = sfj::load_graph(path);
    if (randomize) g = randomize_setup(g, cfg.seed);
    const sfj::PredictionMode mode = sfj::parse_mode(cfg.mode);

    sfj::OpinionTrace trace;
    int status = kOk;
    try {
        trace = sfj::simulate(g, {cfg.tolerance, cfg.max_iter, true});
    } catch (const sfj::NotConverged& e) {
        trace = e.trace();
        status = kNotConverged;
        std::cerr << "sfj: " << e.what() << '\n';
    }

    Output out(cfg.out);
    sfj::write_trace_csv(out.stream(), trace);

    const Eigen::MatrixXd V = sfj::influence_matrix(g).V;
    if (!influence_path.empty()) {
        Output v_out(influence_path);
        sfj::write_matrix_csv(v_out.stream(), V);
    }

    nlohmann::json report = {{"schema", sfj::kSchemaVersion},
                             {"converged", trace.converged},
                             {"iterations", trace.iterations},
                             {"residual", trace.residual},
                             {"tolerance", cfg.tolerance},
                             {"mode", sfj::to_string(mode)}};
    sfj::Partition predicted;
    try {
        predicted = sfj::predict_clusters(sfj::analyze(g), mode).clusters;
        report["conditions_met"] = true;
    } catch (const sfj::ConditionsNotMet& e) {
        report["conditions_met"] = false;
        report["conditions_error"] = e.what();
    }
    Eigen::VectorXd x0(static_cast<Eigen::Index>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) x0(static_cast<Eigen::Index>(i)) = g.x0()[i];
    report["fixed_point_error"] = (trace.final_state() - V * x0).lpNorm<Eigen::Infinity>();
    report["influence_clusters"] = sfj::to_json(sfj::compare_with_V(predicted, V, cfg.tau));
    if (trace.converged) report["trace_clusters"] = sfj::to_json(sfj::compare_with_trace(predicted, trace, cfg.tau));

    (out.to_file() ? std::cout : std::cerr) << report.dump(2) << '\n';
    return status;
}

int cmd_verify(const std::string& path, const RunConfig& cfg) {
    const sfj::SignedDigraph g = sfj::load_graph(path);
    sfj::RobustnessOptions options;
    options.trials = cfg.trials;
    options.seed = cfg.seed;
    options.tau = cfg.tau;
    options.mode = sfj::parse_mode(cfg.mode);
    const sfj::RobustnessReport report = sfj::robustness_harness(g, options);
    Output out(cfg.out);
    out.stream() << sfj::to_json(report).dump(2) << '\n';
    return report.passes == report.trials ? kOk : kConditionsNotMet;
}

int cmd_generate(std::size_t n, std::size_t z, const RunConfig& cfg) {
    const sfj::SignedDigraph g = sfj::generate_network(n, z, cfg.seed);
    Output out(cfg.out);
    out.stream() << sfj::dump_graph(g);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Signed Friedkin-Johnsen multiconsensus analysis"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string graph_path;
    bool randomize = false;
    std::string influence_path;
    std::size_t n = 0;
    std::size_t z = 0;

    const auto positive_real = CLI::PositiveNumber;
    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", cfg.out, "Write the primary output to this file instead of stdout");
    };

    auto* analyze = app.add_subcommand("analyze", "Detect LTP agents and check conditions C1/C2");
    analyze->add_option("graph", graph_path, "Graph JSON file")->required();
    add_common(analyze);

    auto* predict = app.add_subcommand("predict", "Predict opinion clusters from topology");
    predict->add_option("graph", graph_path, "Graph JSON file")->required();
    predict->add_option("--mode", cfg.mode, "strict or relaxed")->check(CLI::IsMember({"strict", "relaxed"}));
    add_common(predict);

    auto* simulate = app.add_subcommand("simulate", "Iterate the SFJ model; CSV trace plus cluster report");
    simulate->add_option("graph", graph_path, "Graph JSON file")->required();
    simulate->add_option("--tol", cfg.tolerance, "Convergence tolerance (infinity norm)")->check(positive_real);
    simulate->add_option("--max-iter", cfg.max_iter, "Iteration cap")->check(CLI::PositiveNumber);
    simulate->add_option("--tau", cfg.tau, "Relative cluster tolerance")->check(positive_real);
    simulate->add_option("--mode", cfg.mode, "strict or relaxed")->check(CLI::IsMember({"strict", "relaxed"}));
    simulate->add_option("--seed", cfg.seed, "Seed for --randomize");
    simulate->add_flag("--randomize", randomize,
                       "Redraw x0 uniformly on [0,10] and stubborn beta on (0,1] before simulating");
    simulate->add_option("--influence", influence_path, "Also write the influence matrix V as CSV");
    add_common(simulate);

    auto* verify = app.add_subcommand("verify", "Randomized-weight robustness check of the LTP partition");
    verify->add_option("graph", graph_path, "Graph JSON file")->required();
    verify->add_option("--trials", cfg.trials, "Number of weight redraws")->check(CLI::PositiveNumber);
    verify->add_option("--seed", cfg.seed, "Harness seed");
    verify->add_option("--tau", cfg.tau, "Relative cluster tolerance")->check(positive_real);
    verify->add_option("--mode", cfg.mode, "strict or relaxed")->check(CLI::IsMember({"strict", "relaxed"}));
    add_common(verify);

    auto* generate = app.add_subcommand("generate", "Emit a random network satisfying C1 and C2");
    generate->add_option("n", n, "Number of agents")->required()->check(CLI::PositiveNumber);
    generate->add_option("z", z, "Number of LTP clusters")->required()->check(CLI::PositiveNumber);
    generate->add_option("--seed", cfg.seed, "Generator seed");
    add_common(generate);

    try {
        app.parse(argc, argv);
        cfg.seed = effective_seed(cfg.seed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(graph_path, cfg);
        if (predict->parsed()) return cmd_predict(graph_path, cfg);
        if (simulate->parsed()) return cmd_simulate(graph_path, cfg, randomize, influence_path);
        if (verify->parsed()) return cmd_verify(graph_path, cfg);
        if (generate->parsed()) return cmd_generate(n, z, cfg);
    } catch (const sfj::ValidationError& e) {
        std::cerr << "sfj: invalid input: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const sfj::NoStubbornAgents& e) {
        std::cerr << "sfj: " << e.what() << '\n';
        return kConditionsNotMet;
    } catch (const sfj::UnreachableNodes& e) {
        std::cerr << "sfj: reachability check fails: " << e.what() << '\n';
        return kConditionsNotMet;
    } catch (const sfj::SingularSystem& e) {
        std::cerr << "sfj: " << e.what() << '\n';
        return kConditionsNotMet;
    } catch (const sfj::ConditionsNotMet& e) {
        std::cerr << "sfj: conditions not met: " << e.what() << '\n';
        return kConditionsNotMet;
    } catch (const sfj::NotConverged& e) {
        std::cerr << "sfj: " << e.what() << '\n';
        return kNotConverged;
    } catch (const sfj::Error& e) {
        std::cerr << "sfj: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
