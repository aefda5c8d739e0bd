#include "qtdp/serialize.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace qtdp {

namespace {

using nlohmann::json;

json encode_ext(double v) {
    if (v == neg_inf) return "-inf";
    return v;
}

double decode_ext(const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "-inf") return neg_inf;
        throw std::invalid_argument("model json: unknown extended-real token");
    }
    return j.get<double>();
}

}  // namespace

json model_to_json(const DynamicProgram& dp) {
    json j;
    j["version"] = "qtdp-model-v1";
    j["n_states"] = dp.n_states;
    j["n_actions"] = dp.n_actions;
    j["beta"] = dp.beta;
    j["feasible"] = dp.feasible;
    json rewards = json::array();
    for (double r : dp.reward) rewards.push_back(encode_ext(r));
    j["reward"] = std::move(rewards);
    j["kernel"] = dp.kernel;
    if (!dp.state_labels.empty()) j["state_labels"] = dp.state_labels;
    if (!dp.action_labels.empty()) j["action_labels"] = dp.action_labels;
    return j;
}

DynamicProgram model_from_json(const json& j) {
    if (j.value("version", "") != "qtdp-model-v1")
        throw std::invalid_argument("model json: missing or unknown version tag");
    DynamicProgram dp;
    dp.n_states = j.at("n_states").get<std::size_t>();
    dp.n_actions = j.at("n_actions").get<std::size_t>();
    dp.beta = j.at("beta").get<double>();
    dp.feasible = j.at("feasible").get<std::vector<std::uint8_t>>();
    for (const auto& r : j.at("reward")) dp.reward.push_back(decode_ext(r));
    dp.kernel = j.at("kernel").get<std::vector<double>>();
    if (j.contains("state_labels"))
        dp.state_labels = j["state_labels"].get<std::vector<std::vector<double>>>();
    if (j.contains("action_labels"))
        dp.action_labels = j["action_labels"].get<std::vector<std::vector<double>>>();
    dp.validate();
    return dp;
}

json report_to_json(const ConvergenceReport& rep) {
    json j;
    j["iterations"] = rep.iterations;
    j["distances"] = rep.distances;
    j["measured_modulus"] = rep.measured_modulus;
    j["certified_error"] = rep.certified_error;
    j["stop_reason"] = rep.stop_reason == StopReason::tolerance ? "tolerance" : "max_iter";
    return j;
}

json assumption_one_to_json(const AssumptionOneReport& rep) {
    json j;
    j["sup_rbar"] = rep.sup_rbar;
    j["inf_rhat"] = encode_ext(rep.inf_rhat);
    j["holds"] = rep.holds;
    return j;
}

json certificate_to_json(const WeightedCertificate& cert, const std::string& kappa_spec) {
    json j;
    j["d"] = cert.d;
    j["alpha"] = cert.alpha;
    j["alpha_beta"] = cert.alpha_beta;
    j["holds"] = cert.holds;
    j["kappa_spec"] = kappa_spec;
    return j;
}

namespace {

void write_labels(std::ostream& os, const std::vector<std::vector<double>>& labels,
                  std::size_t i) {
    if (i < labels.size())
        for (double v : labels[i]) os << v << ",";
}

void label_header(std::ostream& os, const std::vector<std::vector<double>>& labels,
                  const char* prefix) {
    if (!labels.empty())
        for (std::size_t k = 0; k < labels[0].size(); ++k) os << prefix << k << ",";
}

}  // namespace

void write_q_csv(std::ostream& os, const DynamicProgram& dp, const QFunction& g) {
    os.precision(17);
    os << "state,action,";
    label_header(os, dp.state_labels, "state_label_");
    label_header(os, dp.action_labels, "action_label_");
    os << "g\n";
    for (std::size_t x = 0; x < dp.n_states; ++x)
        for (std::size_t a = 0; a < dp.n_actions; ++a) {
            if (!dp.is_feasible(x, a)) continue;
            os << x << "," << a << ",";
            write_labels(os, dp.state_labels, x);
            write_labels(os, dp.action_labels, a);
            os << g(x, a) << "\n";
        }
}

void write_value_csv(std::ostream& os, const DynamicProgram& dp,
                     const std::vector<double>& v) {
    os.precision(17);
    os << "state,";
    label_header(os, dp.state_labels, "state_label_");
    os << "value\n";
    for (std::size_t x = 0; x < dp.n_states; ++x) {
        os << x << ",";
        write_labels(os, dp.state_labels, x);
        if (v[x] == neg_inf)
            os << "-inf\n";
        else
            os << v[x] << "\n";
    }
}

void write_policy_csv(std::ostream& os, const DynamicProgram& dp, const Policy& sigma) {
    os.precision(17);
    os << "state,";
    label_header(os, dp.state_labels, "state_label_");
    os << "action,";
    label_header(os, dp.action_labels, "action_label_");
    os << "\n";
    for (std::size_t x = 0; x < dp.n_states; ++x) {
        const std::size_t a = sigma.choice[x];
        os << x << ",";
        write_labels(os, dp.state_labels, x);
        os << a << ",";
        write_labels(os, dp.action_labels, a);
        os << "\n";
    }
}

namespace {

GridSpec grid_from(const json& j) {
    GridSpec g;
    g.n = j.at("n").get<std::size_t>();
    g.lo = j.at("lo").get<double>();
    g.hi = j.at("hi").get<double>();
    g.log_spacing = j.value("log", false);
    return g;
}

ShockQuadrature shock_from(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "degenerate") return degenerate_shock(j.value("value", 1.0));
    if (type == "lognormal")
        return lognormal_quadrature(j.at("mu").get<double>(), j.at("sigma").get<double>(),
                                    j.at("n").get<std::size_t>());
    if (type == "normal")
        return normal_quadrature(j.at("mu").get<double>(), j.at("sigma").get<double>(),
                                 j.at("n").get<std::size_t>());
    if (type == "uniform")
        return uniform_quadrature(j.at("lo").get<double>(), j.at("hi").get<double>(),
                                  j.at("n").get<std::size_t>());
    if (type == "discrete")
        return discrete_shock(j.at("nodes").get<std::vector<double>>(),
                              j.at("weights").get<std::vector<double>>());
    throw std::invalid_argument("config: unknown shock type '" + type + "'");
}

MarkovChain chain_from(const json& j) {
    MarkovChain c;
    c.values = j.at("values").get<std::vector<double>>();
    c.n = c.values.size();
    for (const auto& row : j.at("transition"))
        for (const auto& p : row) c.transition.push_back(p.get<double>());
    c.validate();
    return c;
}

bool is_degenerate_unit(const ShockQuadrature& s) {
    return s.size() == 1 && std::fabs(s.nodes[0] - 1.0) < 1e-15;
}

}  // namespace

LoadedConfig load_config(const json& j) {
    if (j.value("version", "") != "qtdp-config-v1")
        throw std::invalid_argument("config: missing or unknown version tag");
    LoadedConfig out;
    out.kind = j.at("kind").get<std::string>();
    out.beta = j.at("beta").get<double>();
    const json utility = j.value("utility", json::object());
    CrraUtility u{utility.value("gamma", 1.0)};
    const json grids = j.value("grids", json::object());
    const json shocks = j.value("shocks", json::object());
    const json extras = j.value("extras", json::object());
    MarkovChain chain =
        j.contains("chain") ? chain_from(j["chain"]) : MarkovChain::trivial();

    if (extras.contains("weight"))
        out.weight_spec = {extras["weight"].value("p", 1.0),
                           extras["weight"].value("q", 2.0)};

    if (out.kind == "savings") {
        SavingsConfig cfg;
        cfg.utility = u;
        cfg.beta = out.beta;
        cfg.wealth = grid_from(grids.at("wealth"));
        cfg.consumption = grid_from(grids.at("consumption"));
        cfg.chain = chain;
        if (shocks.contains("income")) cfg.income_shock = shock_from(shocks["income"]);
        if (shocks.contains("return")) cfg.return_shock = shock_from(shocks["return"]);
        cfg.gross_return = extras.value("gross_return", 1.0);
        cfg.linear_utility = utility.value("linear", false);
        cfg.min_saving = extras.value("min_saving", 0.0);
        out.gross_return = cfg.gross_return;
        out.deterministic_cake = !cfg.linear_utility && u.gamma_u == 1.0 &&
                                 chain.n == 1 && chain.values[0] == 0.0 &&
                                 is_degenerate_unit(cfg.income_shock) &&
                                 is_degenerate_unit(cfg.return_shock);
        out.dp = build_optimal_savings(cfg);
    } else if (out.kind == "default") {
        DefaultConfig cfg;
        cfg.utility = u;
        cfg.beta = out.beta;
        cfg.assets = grid_from(grids.at("assets"));
        cfg.borrowing_limit = extras.value("borrowing_limit", 1.0);
        cfg.gross_return = extras.value("gross_return", 1.02);
        cfg.chain = chain;
        if (shocks.contains("income")) cfg.income_shock = shock_from(shocks["income"]);
        out.gross_return = cfg.gross_return;
        out.dp = build_optimal_default(cfg);
    } else if (out.kind == "job_search") {
        JobSearchConfig cfg;
        cfg.utility = u;
        cfg.beta = out.beta;
        cfg.chain = chain;
        cfg.wage_levels = extras.at("wage_levels").get<std::vector<double>>();
        cfg.outside_levels = extras.at("outside_levels").get<std::vector<double>>();
        if (shocks.contains("wage")) cfg.wage_shock = shock_from(shocks["wage"]);
        if (shocks.contains("outside")) cfg.outside_shock = shock_from(shocks["outside"]);
        out.dp = build_job_search(cfg);
    } else if (out.kind == "savings_labor") {
        SavingsLaborConfig cfg;
        cfg.utility = u;
        cfg.beta = out.beta;
        cfg.labor_weight = extras.value("labor_weight", 1.0);
        cfg.wealth = grid_from(grids.at("wealth"));
        cfg.consumption = grid_from(grids.at("consumption"));
        cfg.labor = grid_from(grids.at("labor"));
        cfg.chain = chain;
        cfg.gross_return = extras.value("gross_return", 1.0);
        if (shocks.contains("return")) cfg.return_shock = shock_from(shocks["return"]);
        out.gross_return = cfg.gross_return;
        out.dp = build_savings_labor(cfg);
    } else if (out.kind == "portfolio") {
        PortfolioConfig cfg;
        cfg.utility = u;
        cfg.beta = out.beta;
        cfg.wealth = grid_from(grids.at("wealth"));
        cfg.consumption = grid_from(grids.at("consumption"));
        cfg.chain = chain;
        cfg.portfolios = extras.at("portfolios").get<std::vector<std::vector<double>>>();
        cfg.theta_sets =
            extras.at("theta_sets").get<std::vector<std::vector<std::size_t>>>();
        cfg.asset_returns =
            extras.at("asset_returns").get<std::vector<std::vector<double>>>();
        cfg.risky = extras.at("risky").get<std::vector<bool>>();
        if (shocks.contains("return")) cfg.shock = shock_from(shocks["return"]);
        out.dp = build_portfolio(cfg);
    } else if (out.kind == "growth") {
        GrowthConfig cfg;
        cfg.utility = u;
        cfg.beta = out.beta;
        cfg.eta = extras.value("eta", 1.0);
        cfg.capital = grid_from(grids.at("capital"));
        cfg.investment_floor = extras.value("investment_floor", 0.0);
        cfg.shock_mu = extras.value("shock_mu", 0.0);
        cfg.shock_sigma = extras.value("shock_sigma", 0.1);
        cfg.shock_nodes = extras.value("shock_nodes", std::size_t{11});
        cfg.gamma_risk = extras.value("gamma_risk", 2.0);
        BuiltGrowthModel built = build_rs_growth(cfg);
        out.dp = std::move(built.dp);
        out.risk = built.risk;
        out.kappa = std::move(built.kappa);
        out.alpha = built.alpha;
    } else {
        throw std::invalid_argument("config: unknown kind '" + out.kind + "'");
    }
    if (extras.contains("gamma_risk") && !out.risk)
        out.risk = RiskParams{extras["gamma_risk"].get<double>()};
    return out;
}

}  // namespace qtdp
