#pragma once

#include <iosfwd>
#include <optional>

#include "json.hpp"
#include "qtdp/models.hpp"
#include "qtdp/weighted.hpp"

namespace qtdp {

/// Dense model document, version tag "qtdp-model-v1". Rewards of -inf are
/// encoded as the JSON string "-inf"; everything else is plain numbers.
nlohmann::json model_to_json(const DynamicProgram& dp);
DynamicProgram model_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const ConvergenceReport& rep);
nlohmann::json assumption_one_to_json(const AssumptionOneReport& rep);
nlohmann::json certificate_to_json(const WeightedCertificate& cert,
                                   const std::string& kappa_spec);

/// CSV exports, one row per feasible pair / state, labels first.
void write_q_csv(std::ostream& os, const DynamicProgram& dp, const QFunction& g);
void write_value_csv(std::ostream& os, const DynamicProgram& dp,
                     const std::vector<double>& v);
void write_policy_csv(std::ostream& os, const DynamicProgram& dp, const Policy& sigma);

/// A model built from a "qtdp-config-v1" document, plus the pieces the CLI
/// needs to pick solvers and oracles.
struct LoadedConfig {
    std::string kind;  // savings | default | job_search | savings_labor | portfolio | growth
    DynamicProgram dp;
    std::optional<RiskParams> risk;            // set when the config carries gamma_risk
    std::optional<WeightFunction> kappa;       // prebuilt weight (growth)
    double alpha = 0.0;                        // growth weight's target rate, 0 if none
    std::optional<std::pair<double, double>> weight_spec;  // (p, q_init) for auto weight
    bool deterministic_cake = false;  // single-z, degenerate-shock, log-utility savings
    double gross_return = 1.0;
    double beta = 0.0;
};

/// Parses and builds. Throws std::invalid_argument / nlohmann::json::exception
/// on malformed input.
LoadedConfig load_config(const nlohmann::json& j);

}  // namespace qtdp
