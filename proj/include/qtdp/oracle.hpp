#pragma once

#include <functional>

#include "qtdp/core.hpp"
#include "qtdp/q_transform.hpp"
#include "qtdp/stochastics.hpp"

// Brute-force and closed-form references used by the tests. Everything in
// here recomputes maxima and expectations with its own loops on purpose:
// agreement with the solvers has to be evidence, not a tautology.
namespace qtdp::oracle {

struct TruncatedBellmanResult {
    std::vector<double> v;   // v_horizon, one entry per state
    double tail_bound = 0.0; // beta^horizon * max |finite reward| / (1 - beta)
    double floor = 0.0;      // the clip applied to -inf rewards
};

/// Finite-horizon backward induction on the untransformed value function,
/// v_0 = 0, v_{k+1}(x) = max_a { r(x,a) + beta * sum P(x,a,x') v_k(x') }.
/// -inf rewards are clipped to `floor` rather than handled symbolically:
/// a deliberately different numeric regime from the solver path.
TruncatedBellmanResult truncated_bellman(const DynamicProgram& dp, std::size_t horizon,
                                         double floor = -1e15);

/// All feasible stationary policies in mixed-radix order (state 0 slowest).
/// Throws if the product of per-state feasible counts exceeds 10^6.
std::vector<Policy> enumerate_policies(const DynamicProgram& dp);

struct CakeEatingSolution {
    std::vector<double> value;        // v(w) on the grid
    std::vector<double> consumption;  // c*(w) = (1-beta) w
};

/// Analytic solution of deterministic log-utility cake eating with
/// w' = R(w - c): v(w) = log((1-beta)w)/(1-beta) + beta log(beta R)/(1-beta)^2.
CakeEatingSolution cake_eating_closed_form(double beta, double R,
                                           const std::vector<double>& w_grid);

struct ReservationWageResult {
    double g = 0.0;          // scalar continuation value of searching
    double threshold = 0.0;  // smallest wage node where accepting weakly wins
};

/// Scalar fixed point g = beta * sum_i w_i max{ u(node_i)/(1-beta), u(c) + g }
/// for iid wages and a constant outside option, solved by bisection to 1e-12.
ReservationWageResult reservation_wage(const std::function<double(double)>& u, double beta,
                                       const ShockQuadrature& wages, double outside_value);

/// Solves v(y,z) = u(value_z * node_y) + beta * E_{z}[v(y',z')] as a dense
/// linear system (income draw iid, chain on z). Index: jy * chain.n + iz.
std::vector<double> excluded_value(const MarkovChain& chain, const ShockQuadrature& income,
                                   const std::function<double(double)>& u, double beta);

}  // namespace qtdp::oracle
