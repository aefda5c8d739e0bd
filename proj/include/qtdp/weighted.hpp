#pragma once

#include "qtdp/core.hpp"
#include "qtdp/q_transform.hpp"

namespace qtdp {

/// Per-state weights kappa(x) >= 1 defining the weighted sup-norm.
struct WeightFunction {
    std::vector<double> kappa;
    void validate(std::size_t n_states) const;
};

struct WeightedCertificate {
    double d = 0.0;          // r_bar <= d * kappa
    double alpha = 0.0;      // kappa_hat <= alpha * kappa
    double alpha_beta = 0.0;
    bool holds = false;
};

/// max over feasible (x,a) of |g(x,a)| / kappa(x).
double kappa_norm(const DynamicProgram& dp, const QFunction& g, const WeightFunction& kappa);

/// kappa_hat(x,a) = E_{x,a} kappa(x'). Dense table, valid at feasible pairs.
std::vector<double> kappa_hat(const DynamicProgram& dp, const WeightFunction& kappa);

/// Exact grid maxima: d = max r_bar/kappa (clamped to >= 0), alpha = max
/// kappa_hat/kappa over feasible pairs. holds iff d finite and alpha*beta < 1.
WeightedCertificate certify_assumption_three(const DynamicProgram& dp,
                                             const WeightFunction& kappa);

/// Searches kappa(x) = p*w + q by doubling q from q_init until the certificate
/// holds, where w is coordinate 0 of the state labels. Throws if the cap
/// 2^40 * q_init is reached without a passing weight.
std::pair<WeightFunction, WeightedCertificate> auto_weight_linear(const DynamicProgram& dp,
                                                                  double p, double q_init);

/// Same contract as solve_fixed_point but with distances in the kappa-norm and
/// modulus alpha*beta taken from the certificate. Requires the certificate to
/// hold and min r_hat > -inf.
std::pair<QFunction, ConvergenceReport> solve_fixed_point_weighted(
    const DynamicProgram& dp, const WeightFunction& kappa, const QFunction& g0,
    double tol = 1e-10, std::size_t max_iter = 200000);

}  // namespace qtdp
