#pragma once

#include <optional>

#include "qtdp/core.hpp"
#include "qtdp/q_transform.hpp"
#include "qtdp/weighted.hpp"

namespace qtdp {

struct RiskParams {
    double gamma = 0.0;  // risk-sensitivity coefficient, > 0
    void validate() const;
};

/// Grid verification of the monotone structure behind the weighted
/// risk-sensitive solver: states ordered by index (the builders order product
/// states wealth-major so index order matches the wealth order per z-block;
/// for single-chain models it is the full order).
struct MonotoneStructure {
    bool reward_increasing = false;     // r(x,a) increasing in x for each fixed a
    bool kernel_monotone = false;       // rows first-order stochastically monotone in x
    bool feasibility_nested = false;    // Gamma(x1) subset of Gamma(x2) for x1 <= x2
    bool all() const { return reward_increasing && kernel_monotone && feasibility_nested; }
};

/// Entropic certainty equivalent -(beta/gamma) * log sum_i dist_i e^{-gamma v_i},
/// stabilized by factoring out the max exponent. -inf values with positive mass
/// give -inf; beta = 1 yields the undiscounted certainty equivalent.
double entropic_expectation(std::span<const double> dist, std::span<const double> values,
                            double gamma, double beta);

/// Risk-sensitive transformed Bellman operator:
/// (Sg)(x,a) = -(beta/gamma) log E_{x,a} exp(-gamma * max_{a'}{r + g}(x')).
QFunction apply_S_rs(const DynamicProgram& dp, const QFunction& g, const RiskParams& params);
QFunction apply_S_rs_serial(const DynamicProgram& dp, const QFunction& g,
                            const RiskParams& params);

/// r_hat(x,a) = -(1/gamma) log E_{x,a} e^{-gamma r_bar(x')}; the risk-sensitive
/// twin of the additive r_hat for the assumption check.
std::vector<double> r_hat_rs(const DynamicProgram& dp, const RiskParams& params);

/// Risk-sensitive twin of check_assumption_one, built on r_hat_rs.
AssumptionOneReport check_assumption_one_rs(const DynamicProgram& dp, const RiskParams& params);

MonotoneStructure verify_monotone_assumptions(const DynamicProgram& dp);

/// Fixed point of apply_S_rs. Without kappa: sup-norm iteration with modulus
/// beta (requires the risk-sensitive assumption check). With kappa: kappa-norm
/// iteration with modulus alpha*beta on the monotone class; each iterate is
/// asserted (not projected) to stay increasing in x.
std::pair<QFunction, ConvergenceReport> solve_fixed_point_rs(
    const DynamicProgram& dp, const RiskParams& params,
    const std::optional<WeightFunction>& kappa, const QFunction& g0, double tol = 1e-10,
    std::size_t max_iter = 200000);

/// T_sigma applied `horizon` times to r_bar, with
/// T_sigma v(x) = r(x,sigma(x)) - (beta/gamma) log E e^{-gamma v(x')}.
std::vector<double> sigma_value_rs(const DynamicProgram& dp, const Policy& sigma,
                                   const RiskParams& params, std::size_t horizon);

}  // namespace qtdp
