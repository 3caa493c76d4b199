#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "sfj/dynamics.hpp"
#include "sfj/ltp.hpp"
#include "sfj/verification.hpp"

namespace sfj {

inline constexpr int kSchemaVersion = 1;

// Every JSON document below carries "schema": kSchemaVersion.

/// {"ltp": [int], "persuaded": {"p": [int]}, "C1": bool, "C2": bool,
///  "uncovered": [int], "violations": [{"node": int, "reason": str}]}
nlohmann::json to_json(const LtpCertificate& cert);
LtpCertificate certificate_from_json(const nlohmann::json& doc);

/// {"trials", "passes", "worst_spread", "predicted": [[int]], "prediction_stable", "failed_trials"}
nlohmann::json to_json(const RobustnessReport& report);

nlohmann::json to_json(const ClusterReport& report);
nlohmann::json to_json(const ClusterPrediction& prediction, PredictionMode mode);
nlohmann::json partition_to_json(const Partition& p);

/// "k,x_1,...,x_n" followed by one row per stored state. Values use
/// round-trip precision.
void write_trace_csv(std::ostream& out, const OpinionTrace& trace);
/// n rows of n comma-separated entries, no header.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m);

const char* to_string(PredictionMode mode);
PredictionMode parse_mode(const std::string& text);

}  // namespace sfj
