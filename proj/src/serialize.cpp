#include "sfj/serialize.hpp"

#include <charconv>
#include <string>

namespace sfj {

using nlohmann::json;

namespace {

std::string format_real(double v) {
    char buffer[32];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, v);
    return std::string(buffer, result.ptr);
}

}  // namespace

json partition_to_json(const Partition& p) {
    json out = json::array();
    for (const auto& cluster : p) out.push_back(json(std::vector<NodeId>(cluster.begin(), cluster.end())));
    return out;
}

json to_json(const LtpCertificate& cert) {
    json persuaded = json::object();
    for (const auto& [p, members] : cert.persuaded)
        persuaded[std::to_string(p)] = std::vector<NodeId>(members.begin(), members.end());
    json violations = json::array();
    for (const auto& v : cert.violations) violations.push_back({{"node", v.node}, {"reason", v.reason}});
    return {{"schema", kSchemaVersion},
            {"ltp", std::vector<NodeId>(cert.ltp_agents.begin(), cert.ltp_agents.end())},
            {"persuaded", persuaded},
            {"C1", cert.covered},
            {"C2", cert.cooperative},
            {"uncovered", cert.uncovered},
            {"violations", violations}};
}

LtpCertificate certificate_from_json(const json& doc) {
    LtpCertificate cert;
    for (NodeId p : doc.at("ltp")) cert.ltp_agents.insert(p);
    for (const auto& [key, members] : doc.at("persuaded").items()) {
        auto& set = cert.persuaded[std::stoi(key)];
        for (NodeId q : members) set.insert(q);
    }
    cert.covered = doc.at("C1").get<bool>();
    cert.cooperative = doc.at("C2").get<bool>();
    if (doc.contains("uncovered")) cert.uncovered = doc.at("uncovered").get<std::vector<NodeId>>();
    for (const auto& v : doc.at("violations"))
        cert.violations.push_back({v.at("node").get<NodeId>(), v.at("reason").get<std::string>()});
    return cert;
}

json to_json(const RobustnessReport& report) {
    return {{"schema", kSchemaVersion},
            {"trials", report.trials},
            {"passes", report.passes},
            {"worst_spread", report.worst_spread},
            {"predicted", partition_to_json(report.predicted)},
            {"prediction_stable", report.prediction_stable},
            {"failed_trials", report.failed_trials}};
}

json to_json(const ClusterReport& report) {
    return {{"schema", kSchemaVersion},
            {"predicted", partition_to_json(report.predicted)},
            {"observed", partition_to_json(report.observed)},
            {"observed_diameters", report.observed_diameters},
            {"match", report.match},
            {"max_within_cluster_spread", report.max_within_cluster_spread},
            {"tolerance", report.tolerance}};
}

json to_json(const ClusterPrediction& prediction, PredictionMode mode) {
    return {{"schema", kSchemaVersion},
            {"mode", to_string(mode)},
            {"clusters", partition_to_json(prediction.clusters)},
            {"guaranteed", prediction.guaranteed}};
}

void write_trace_csv(std::ostream& out, const OpinionTrace& trace) {
    const Eigen::Index n = trace.states.empty() ? 0 : trace.states.front().size();
    out << "k";
    for (Eigen::Index i = 1; i <= n; ++i) out << ",x_" << i;
    out << '\n';
    // With keep_states off only x(0) and the last state are stored.
    const bool compact = trace.states.size() != trace.iterations + 1;
    for (std::size_t k = 0; k < trace.states.size(); ++k) {
        out << (compact && k != 0 ? trace.iterations : k);
        for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_real(trace.states[k](i));
        out << '\n';
    }
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j != 0) out << ',';
            out << format_real(m(i, j));
        }
        out << '\n';
    }
}

const char* to_string(PredictionMode mode) { return mode == PredictionMode::strict ? "strict" : "relaxed"; }

PredictionMode parse_mode(const std::string& text) {
    if (text == "strict") return PredictionMode::strict;
    if (text == "relaxed") return PredictionMode::relaxed;
    throw Error("unknown mode '" + text + "' (expected strict or relaxed)");
}

}  // namespace sfj
