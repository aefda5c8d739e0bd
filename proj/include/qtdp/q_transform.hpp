#pragma once

#include <cstddef>
#include <vector>

#include "qtdp/core.hpp"

namespace qtdp {

/// Candidate action-value function. Dense table over n_states x n_actions;
/// only entries at feasible pairs are meaningful and they must stay finite.
struct QFunction {
    std::size_t n_states = 0;
    std::size_t n_actions = 0;
    std::vector<double> values;

    static QFunction constant(const DynamicProgram& dp, double c) {
        return {dp.n_states, dp.n_actions,
                std::vector<double>(dp.n_states * dp.n_actions, c)};
    }
    static QFunction zeros(const DynamicProgram& dp) { return constant(dp, 0.0); }

    double operator()(std::size_t x, std::size_t a) const { return values[x * n_actions + a]; }
    double& at(std::size_t x, std::size_t a) { return values[x * n_actions + a]; }
};

struct Policy {
    std::vector<std::size_t> choice;  // per-state action index
};

enum class StopReason { tolerance, max_iter };

struct ConvergenceReport {
    std::size_t iterations = 0;
    std::vector<double> distances;    // per-iteration step sizes in the solver's norm
    double measured_modulus = 0.0;    // max step ratio over resolvable steps
    double certified_error = 0.0;     // modulus * d_last / (1 - modulus)
    StopReason stop_reason = StopReason::tolerance;
};

/// Sup-norm of g1 - g2 over feasible pairs.
double sup_norm_diff(const DynamicProgram& dp, const QFunction& g1, const QFunction& g2);

/// Smallest step size the measured modulus trusts; smaller steps are
/// roundoff-dominated and excluded from the ratio.
double resolvable_floor(double d0);

ConvergenceReport make_convergence_report(std::vector<double> distances, double modulus,
                                          StopReason reason);

/// The transformed Bellman operator:
/// (Sg)(x,a) = beta * E_{x,a} max_{a' feasible} { r(x',a') + g(x',a') }.
/// Throws if the inner max is -inf at a state with positive reachable mass.
/// OpenMP-parallel over feasible pairs; identical output to apply_S_serial.
QFunction apply_S(const DynamicProgram& dp, const QFunction& g);

/// Plain serial reference for apply_S, kept for testing and benchmarking.
QFunction apply_S_serial(const DynamicProgram& dp, const QFunction& g);

/// Iterates S from g0 until the sup-norm step is <= tol*(1-beta)/beta, which
/// certifies distance <= tol to the unique fixed point g*.
std::pair<QFunction, ConvergenceReport> solve_fixed_point(const DynamicProgram& dp,
                                                          const QFunction& g0,
                                                          double tol = 1e-10,
                                                          std::size_t max_iter = 200000);

/// argmax_{a feasible} { r(x,a) + g(x,a) }, lowest index on ties.
Policy greedy_policy(const DynamicProgram& dp, const QFunction& g);

/// v(x) = max_{a feasible} { r(x,a) + g(x,a) }; may be -inf.
std::vector<double> recover_value(const DynamicProgram& dp, const QFunction& g);

/// Empirical contraction modulus: max over random pairs (g1,g2) of
/// ||Sg1-Sg2|| / ||g1-g2||. Deterministic given seed.
double measure_contraction(const DynamicProgram& dp, std::size_t trials, std::uint64_t seed);

/// Truncated sigma-value: sum_{t=0}^{horizon} beta^t E_x r(x_t, sigma(x_t)).
std::vector<double> sigma_value(const DynamicProgram& dp, const Policy& sigma,
                                std::size_t horizon);

/// Tail bound beta^{horizon+1} * max|r_bar| / (1-beta) for the truncation above.
double sigma_value_tail(const DynamicProgram& dp, std::size_t horizon);

}  // namespace qtdp
