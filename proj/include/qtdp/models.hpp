#pragma once

#include <optional>

#include "qtdp/core.hpp"
#include "qtdp/risk_sensitive.hpp"
#include "qtdp/stochastics.hpp"
#include "qtdp/weighted.hpp"

namespace qtdp {

/// CRRA utility: c^{1-gamma}/(1-gamma) for gamma != 1, log c for gamma = 1.
/// u(0) = -inf when gamma >= 1, u(0) = 0 when gamma < 1.
struct CrraUtility {
    double gamma_u = 1.0;
    double operator()(double c) const;
};

struct GridSpec {
    std::size_t n = 0;
    double lo = 0.0;
    double hi = 0.0;
    bool log_spacing = false;
    std::vector<double> make() const;
};

struct SavingsConfig {
    CrraUtility utility;
    double beta = 0.95;
    GridSpec wealth;
    GridSpec consumption;
    MarkovChain chain = MarkovChain::trivial();     // values: income level per z
    ShockQuadrature income_shock = degenerate_shock(1.0);   // y' = values[z'] * xi_y
    double gross_return = 1.0;                              // R' = gross_return * xi_R
    ShockQuadrature return_shock = degenerate_shock(1.0);
    bool linear_utility = false;  // u(c) = c instead of CRRA (weighted extension demo)
    double min_saving = 0.0;      // feasibility also requires w - c >= min_saving;
                                  // keeps deterministic dynamics off the grid floor
};

struct DefaultConfig {
    CrraUtility utility;
    double beta = 0.95;
    GridSpec assets;                 // w' choice grid; lo is the borrowing limit -b
    double borrowing_limit = 1.0;    // b > 0
    double gross_return = 1.02;      // R
    MarkovChain chain = MarkovChain::trivial();
    ShockQuadrature income_shock = degenerate_shock(1.0);  // y = values[z] * node
};

struct JobSearchConfig {
    CrraUtility utility;
    double beta = 0.9;
    MarkovChain chain = MarkovChain::trivial();
    std::vector<double> wage_levels;     // per z; wage = wage_levels[z] * wage node
    std::vector<double> outside_levels;  // per z; outside option = outside_levels[z] * node
    ShockQuadrature wage_shock = degenerate_shock(1.0);
    ShockQuadrature outside_shock = degenerate_shock(1.0);
};

struct SavingsLaborConfig {
    CrraUtility utility;          // consumption part
    double labor_weight = 1.0;    // u(c,l) = u_c(c) - labor_weight * l
    double beta = 0.95;
    GridSpec wealth;
    GridSpec consumption;
    GridSpec labor;               // subset of [0,1]
    MarkovChain chain = MarkovChain::trivial();  // values: wage y(z)
    double gross_return = 1.0;
    ShockQuadrature return_shock = degenerate_shock(1.0);
};

struct PortfolioConfig {
    CrraUtility utility;
    double beta = 0.95;
    GridSpec wealth;
    GridSpec consumption;
    MarkovChain chain = MarkovChain::trivial();  // values: income y(z)
    std::vector<std::vector<double>> portfolios;         // theta list, weights over assets
    std::vector<std::vector<std::size_t>> theta_sets;    // admissible theta indices per z
    std::vector<std::vector<double>> asset_returns;      // [asset][z'] base gross return
    std::vector<bool> risky;                             // asset scales with the shock
    ShockQuadrature shock = degenerate_shock(1.0);
};

struct GrowthConfig {
    CrraUtility utility;   // log by default
    double beta = 0.95;
    double eta = 1.0;
    GridSpec capital;           // state grid; investment grid spans [floor, capital.hi]
    double investment_floor = 0.0;  // must stay below capital.lo
    double shock_mu = 0.0;
    double shock_sigma = 0.1;
    std::size_t shock_nodes = 11;
    double gamma_risk = 2.0;
};

struct BuiltGrowthModel {
    DynamicProgram dp;
    RiskParams risk;
    WeightFunction kappa;
    double alpha = 0.0;  // the weight's certified growth rate target
};

DynamicProgram build_optimal_savings(const SavingsConfig& cfg);
DynamicProgram build_optimal_default(const DefaultConfig& cfg);
DynamicProgram build_job_search(const JobSearchConfig& cfg);
DynamicProgram build_savings_labor(const SavingsLaborConfig& cfg);
DynamicProgram build_portfolio(const PortfolioConfig& cfg);
BuiltGrowthModel build_rs_growth(const GrowthConfig& cfg);

// State indexing helpers (wealth-major over z within each regime block).
inline std::size_t savings_state(std::size_t iw, std::size_t iz, std::size_t nz) {
    return iw * nz + iz;
}
inline std::size_t default_state(std::size_t regime, std::size_t iw, std::size_t jy,
                                 std::size_t iz, std::size_t nw, std::size_t nq,
                                 std::size_t nz) {
    return ((regime * nw + iw) * nq + jy) * nz + iz;
}
inline std::size_t job_state(std::size_t regime, std::size_t iw, std::size_t ic,
                             std::size_t iz, std::size_t nw, std::size_t nc, std::size_t nz) {
    return ((regime * nw + iw) * nc + ic) * nz + iz;
}

}  // namespace qtdp
