#pragma once

// Shared fixture models for the unit and acceptance suites. Sizes are kept at
// desk scale (well under 2,000 states) so every suite runs in seconds.

#include "qtdp/models.hpp"

namespace fixtures {

using namespace qtdp;

inline MarkovChain two_state_income() {
    return MarkovChain{2, {0.9, 0.1, 0.2, 0.8}, {0.5, 1.5}};
}

// CRRA gamma=2 savings with a two-state income chain and lognormal income risk.
inline DynamicProgram savings() {
    SavingsConfig cfg;
    cfg.utility = {2.0};
    cfg.beta = 0.9;
    cfg.wealth = {40, 0.1, 10.0, true};
    cfg.consumption = {20, 0.05, 10.0, true};
    cfg.chain = two_state_income();
    cfg.income_shock = lognormal_quadrature(0.0, 0.2, 5);
    cfg.gross_return = 1.02;
    return build_optimal_savings(cfg);
}

// Same model with the consumption grid floored at 1e-8 * w_min, driving the
// worst reward below -10^7 while r_hat stays bounded.
inline DynamicProgram savings_deep_floor() {
    SavingsConfig cfg;
    cfg.utility = {2.0};
    cfg.beta = 0.9;
    cfg.wealth = {25, 0.1, 10.0, true};
    cfg.consumption = {25, 1e-9, 10.0, true};
    cfg.chain = two_state_income();
    cfg.income_shock = lognormal_quadrature(0.0, 0.2, 5);
    cfg.gross_return = 1.02;
    return build_optimal_savings(cfg);
}

// Linear utility u(c) = c with beta * E R = 0.95 > beta: sup-norm boundedness
// fails in spirit, the weighted norm carries the solve.
inline DynamicProgram savings_linear() {
    SavingsConfig cfg;
    cfg.beta = 0.9;
    cfg.wealth = {30, 0.1, 20.0, true};
    cfg.consumption = {15, 0.1, 20.0, true};
    cfg.chain = two_state_income();
    cfg.gross_return = 0.95 / 0.9;
    cfg.linear_utility = true;
    return build_optimal_savings(cfg);
}

// Deterministic log-utility cake eating: single z with zero income, R = 1/beta
// so optimal wealth is stationary, and the consumption grid contains
// (1-beta) * w exactly for every wealth node (both grids share the log ratio).
// min_saving pins R(w - c) >= w_lo, so deterministic paths never hit the grid
// floor (clamping there would mint wealth and corrupt the closed form).
inline SavingsConfig cake_config(std::size_t n = 200) {
    SavingsConfig cfg;
    cfg.utility = {1.0};
    cfg.beta = 0.95;
    cfg.wealth = {n, 0.5, 20.0, true};
    cfg.consumption = {n, 0.5 * (1.0 - cfg.beta), 20.0 * (1.0 - cfg.beta), true};
    cfg.gross_return = 1.0 / cfg.beta;
    cfg.chain = MarkovChain{1, {1.0}, {0.0}};
    cfg.min_saving = cfg.wealth.lo / cfg.gross_return;
    return cfg;
}
inline DynamicProgram cake(std::size_t n = 200) { return build_optimal_savings(cake_config(n)); }

inline DynamicProgram default_model() {
    DefaultConfig cfg;
    cfg.utility = {1.0};
    cfg.beta = 0.9;
    cfg.assets = {12, -1.0, 4.0, false};
    cfg.borrowing_limit = 1.0;
    cfg.gross_return = 1.02;
    cfg.chain = MarkovChain{2, {0.8, 0.2, 0.3, 0.7}, {1.0, 2.0}};
    cfg.income_shock = discrete_shock({0.9, 1.1}, {0.5, 0.5});
    return build_optimal_default(cfg);
}

// iid lognormal wages, constant outside option 0.5: the reservation-wage case.
inline ShockQuadrature job_wages() { return lognormal_quadrature(0.0, 0.25, 15); }

inline DynamicProgram job_search() {
    JobSearchConfig cfg;
    cfg.utility = {1.0};
    cfg.beta = 0.9;
    cfg.wage_levels = {1.0};
    cfg.outside_levels = {1.0};
    cfg.wage_shock = job_wages();
    cfg.outside_shock = degenerate_shock(0.5);
    return build_job_search(cfg);
}

inline DynamicProgram savings_labor() {
    SavingsLaborConfig cfg;
    cfg.utility = {1.0};
    cfg.labor_weight = 0.7;
    cfg.beta = 0.9;
    cfg.wealth = {15, 0.2, 5.0, true};
    cfg.consumption = {10, 0.1, 5.0, true};
    cfg.labor = {3, 0.0, 1.0, false};
    cfg.chain = MarkovChain{2, {0.8, 0.2, 0.3, 0.7}, {0.8, 1.2}};
    cfg.gross_return = 1.03;
    cfg.return_shock = discrete_shock({0.95, 1.05}, {0.5, 0.5});
    return build_savings_labor(cfg);
}

inline PortfolioConfig portfolio_config() {
    PortfolioConfig cfg;
    cfg.utility = {2.0};
    cfg.beta = 0.9;
    cfg.wealth = {20, 0.2, 8.0, true};
    cfg.consumption = {12, 0.1, 8.0, true};
    cfg.chain = MarkovChain{2, {0.9, 0.1, 0.2, 0.8}, {0.5, 1.0}};
    cfg.portfolios = {{1.0, 0.0}, {0.5, 0.5}, {0.0, 1.0}};
    cfg.theta_sets = {{0, 1, 2}, {0, 1}};
    cfg.asset_returns = {{1.02, 1.02}, {1.00, 1.10}};
    cfg.risky = {false, true};
    cfg.shock = lognormal_quadrature(-0.02, 0.2, 5);
    return cfg;
}
inline DynamicProgram portfolio() { return build_portfolio(portfolio_config()); }

// Example-2 growth model on the eta > 1 branch: alpha = eta, beta < 1/eta.
// The investment floor keeps the entropic reward bound strictly interior.
inline GrowthConfig growth_config() {
    GrowthConfig cfg;
    cfg.utility = {1.0};
    cfg.beta = 0.8;
    cfg.eta = 1.2;
    cfg.capital = {40, 0.7, 6.0, true};
    cfg.investment_floor = 0.5;
    cfg.shock_mu = 0.0;
    cfg.shock_sigma = 0.1;
    cfg.shock_nodes = 11;
    cfg.gamma_risk = 2.0;
    return cfg;
}
inline BuiltGrowthModel growth() { return build_rs_growth(growth_config()); }

// Micro instances for exhaustive policy enumeration (<= 6 states, <= 4
// feasible actions per state).
inline DynamicProgram micro_savings() {
    SavingsConfig cfg;
    cfg.utility = {1.0};
    cfg.beta = 0.9;
    cfg.wealth = {3, 0.5, 2.0, false};
    cfg.consumption = {3, 0.25, 1.5, false};
    cfg.chain = MarkovChain{2, {0.7, 0.3, 0.4, 0.6}, {0.3, 0.8}};
    return build_optimal_savings(cfg);
}

inline DynamicProgram micro_growth() {
    GrowthConfig cfg;
    cfg.utility = {1.0};
    cfg.beta = 0.8;
    cfg.eta = 1.2;
    cfg.capital = {4, 0.7, 3.0, true};
    cfg.investment_floor = 0.5;
    cfg.shock_nodes = 3;
    return build_rs_growth(cfg).dp;
}

// Handcrafted 2-state 2-action chain with asymmetric kernels.
inline DynamicProgram micro_chain() {
    DynamicProgram dp;
    dp.n_states = 2;
    dp.n_actions = 2;
    dp.beta = 0.95;
    dp.feasible = {1, 1, 1, 1};
    dp.reward = {1.0, 0.0, -0.5, 2.0};
    dp.kernel = {0.8, 0.2, 0.1, 0.9, 0.5, 0.5, 1.0, 0.0};
    return dp;
}

struct NamedModel {
    const char* name;
    DynamicProgram dp;
};

// The six example models used throughout the acceptance suite.
inline std::vector<NamedModel> all_models() {
    std::vector<NamedModel> out;
    out.push_back({"savings", savings()});
    out.push_back({"default", default_model()});
    out.push_back({"job_search", job_search()});
    out.push_back({"savings_labor", savings_labor()});
    out.push_back({"portfolio", portfolio()});
    out.push_back({"growth", growth().dp});
    return out;
}

}  // namespace fixtures
