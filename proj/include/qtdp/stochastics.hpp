#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qtdp/core.hpp"

namespace qtdp {

/// Finite Markov chain for the exogenous state, with a per-state value
/// (income level, wage scale, ...).
struct MarkovChain {
    std::size_t n = 0;
    std::vector<double> transition;  // n x n, row-stochastic
    std::vector<double> values;      // per-state level

    double p(std::size_t i, std::size_t j) const { return transition[i * n + j]; }
    void validate() const;

    static MarkovChain trivial() { return MarkovChain{1, {1.0}, {1.0}}; }
};

/// Discretization of an iid shock as nodes with probability weights.
struct ShockQuadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::string description;

    std::size_t size() const { return nodes.size(); }
    void validate() const;
    double mean() const;
};

/// Gauss-Hermite quadrature mapped through exp(mu + sigma*sqrt(2)*t);
/// weights sum to 1 and the quadrature mean converges to exp(mu+sigma^2/2).
ShockQuadrature lognormal_quadrature(double mu, double sigma, std::size_t n_nodes);

/// Gauss-Hermite quadrature for N(mu, sigma^2).
ShockQuadrature normal_quadrature(double mu, double sigma, std::size_t n_nodes);

/// Midpoint rule on [lo, hi] with equal weights.
ShockQuadrature uniform_quadrature(double lo, double hi, std::size_t n_nodes);

ShockQuadrature degenerate_shock(double value);
ShockQuadrature discrete_shock(std::vector<double> nodes, std::vector<double> weights);

/// Raw Gauss-Hermite rule for weight exp(-t^2): nodes and weights with
/// sum(weights) = sqrt(pi). Exact for polynomials of degree <= 2n-1.
void gauss_hermite(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights);

/// Mean-preserving two-point lottery onto a sorted grid. Values outside the
/// grid are clamped to the nearest endpoint.
struct GridLottery {
    std::size_t lo = 0, hi = 0;
    double w_lo = 1.0, w_hi = 0.0;
};
GridLottery project_to_grid(double value, std::span<const double> grid);

/// Next endogenous value as a function of (endogenous index, exogenous index,
/// action index, next exogenous index, shock realizations). Shock dimensions
/// are independent by construction: only product quadratures are accepted.
using LawOfMotion = std::function<double(std::size_t ix, std::size_t iz, std::size_t ia,
                                         std::size_t iz_next, std::span<const double> xi)>;

/// Builds the dense kernel over the product state (ix, iz) -> index ix*chain.n+iz:
/// P(x,a,.) = sum_z' chain(z,z') sum_nodes prod_k w_k * lottery(law(x,a,z',nodes)).
/// Every row is stochastic by construction.
std::vector<double> compose_kernel(const std::vector<double>& endo_grid,
                                   std::size_t n_actions,
                                   const MarkovChain& chain,
                                   const std::vector<ShockQuadrature>& shocks,
                                   const LawOfMotion& law);

}  // namespace qtdp
