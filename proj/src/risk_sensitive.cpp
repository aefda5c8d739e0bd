#include "qtdp/risk_sensitive.hpp"

#include <cmath>
#include <stdexcept>

namespace qtdp {

void RiskParams::validate() const {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("RiskParams: gamma must be positive and finite");
}

double entropic_expectation(std::span<const double> dist, std::span<const double> values,
                            double gamma, double beta) {
    // factor out the max exponent so e^{-gamma v} cannot overflow for finite v
    double m = neg_inf;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (dist[i] == 0.0) continue;
        if (values[i] == neg_inf) return neg_inf;
        m = std::max(m, -gamma * values[i]);
    }
    long double s = 0.0L;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (dist[i] == 0.0) continue;
        s += static_cast<long double>(dist[i]) * std::exp(-gamma * values[i] - m);
    }
    return -(beta / gamma) * (m + static_cast<double>(std::log(s)));
}

namespace {

QFunction apply_S_rs_impl(const DynamicProgram& dp, const QFunction& g,
                          const RiskParams& params, bool parallel) {
    params.validate();
    const std::vector<double> m = recover_value(dp, g);
    QFunction out = QFunction::zeros(dp);
    const std::size_t total = dp.n_states * dp.n_actions;
    bool diverged = false;
#pragma omp parallel for schedule(static) if (parallel)
    for (std::size_t idx = 0; idx < total; ++idx) {
        const std::size_t x = idx / dp.n_actions;
        const std::size_t a = idx % dp.n_actions;
        if (!dp.is_feasible(x, a)) continue;
        double w = entropic_expectation({dp.kernel_row(x, a), dp.n_states}, m,
                                        params.gamma, dp.beta);
        if (w == neg_inf) {
            diverged = true;
            continue;
        }
        out.values[idx] = w;
    }
    if (diverged)
        throw std::runtime_error(
            "apply_S_rs: entropic expectation diverged (inner max -inf with positive mass)");
    return out;
}

}  // namespace

QFunction apply_S_rs(const DynamicProgram& dp, const QFunction& g, const RiskParams& params) {
    return apply_S_rs_impl(dp, g, params, true);
}

QFunction apply_S_rs_serial(const DynamicProgram& dp, const QFunction& g,
                            const RiskParams& params) {
    return apply_S_rs_impl(dp, g, params, false);
}

std::vector<double> r_hat_rs(const DynamicProgram& dp, const RiskParams& params) {
    params.validate();
    const std::vector<double> rb = r_bar(dp);
    std::vector<double> out(dp.n_states * dp.n_actions, 0.0);
    for (std::size_t x = 0; x < dp.n_states; ++x)
        for (std::size_t a = 0; a < dp.n_actions; ++a)
            if (dp.is_feasible(x, a))
                out[x * dp.n_actions + a] = entropic_expectation(
                    {dp.kernel_row(x, a), dp.n_states}, rb, params.gamma, 1.0);
    return out;
}

AssumptionOneReport check_assumption_one_rs(const DynamicProgram& dp, const RiskParams& params) {
    AssumptionOneReport rep;
    for (double v : r_bar(dp)) rep.sup_rbar = std::max(rep.sup_rbar, v);
    const std::vector<double> rh = r_hat_rs(dp, params);
    for (std::size_t x = 0; x < dp.n_states; ++x)
        for (std::size_t a = 0; a < dp.n_actions; ++a)
            if (dp.is_feasible(x, a))
                rep.inf_rhat = std::min(rep.inf_rhat, rh[x * dp.n_actions + a]);
    rep.holds = rep.sup_rbar < pos_inf && rep.inf_rhat > neg_inf;
    return rep;
}

MonotoneStructure verify_monotone_assumptions(const DynamicProgram& dp) {
    MonotoneStructure ms;
    ms.reward_increasing = true;
    ms.feasibility_nested = true;
    ms.kernel_monotone = true;
    for (std::size_t x = 0; x + 1 < dp.n_states; ++x) {
        for (std::size_t a = 0; a < dp.n_actions; ++a) {
            const bool f_lo = dp.is_feasible(x, a), f_hi = dp.is_feasible(x + 1, a);
            if (f_lo && !f_hi) ms.feasibility_nested = false;
            if (!(f_lo && f_hi)) continue;
            if (dp.r(x + 1, a) < dp.r(x, a) - 1e-12) ms.reward_increasing = false;
            // first-order stochastic dominance of the upper row over the lower
            const double* lo = dp.kernel_row(x, a);
            const double* hi = dp.kernel_row(x + 1, a);
            long double cdf_lo = 0.0L, cdf_hi = 0.0L;
            for (std::size_t y = 0; y < dp.n_states; ++y) {
                cdf_lo += lo[y];
                cdf_hi += hi[y];
                if (static_cast<double>(cdf_hi) > static_cast<double>(cdf_lo) + 1e-9)
                    ms.kernel_monotone = false;
            }
        }
    }
    return ms;
}

namespace {

void assert_increasing(const DynamicProgram& dp, const QFunction& g) {
    for (std::size_t x = 0; x + 1 < dp.n_states; ++x)
        for (std::size_t a = 0; a < dp.n_actions; ++a)
            if (dp.is_feasible(x, a) && dp.is_feasible(x + 1, a) &&
                g(x + 1, a) < g(x, a) - 1e-9)
                throw std::runtime_error(
                    "solve_fixed_point_rs: iterate left the monotone class");
}

}  // namespace

std::pair<QFunction, ConvergenceReport> solve_fixed_point_rs(
    const DynamicProgram& dp, const RiskParams& params,
    const std::optional<WeightFunction>& kappa, const QFunction& g0, double tol,
    std::size_t max_iter) {
    params.validate();
    if (!(tol > 0.0)) throw std::invalid_argument("solve_fixed_point_rs: tol must be > 0");
    double modulus = dp.beta;
    if (kappa) {
        WeightedCertificate cert = certify_assumption_three(dp, *kappa);
        if (!cert.holds)
            throw std::runtime_error("solve_fixed_point_rs: weighted certificate does not hold");
        if (!verify_monotone_assumptions(dp).all())
            throw std::runtime_error("solve_fixed_point_rs: monotone assumptions failed");
        modulus = cert.alpha_beta;
    }
    if (!check_assumption_one_rs(dp, params).holds)
        throw std::runtime_error("solve_fixed_point_rs: r_hat_rs unbounded below");
    const double stop = tol * (1.0 - modulus) / modulus;
    QFunction g = g0;
    if (kappa) assert_increasing(dp, g);
    std::vector<double> distances;
    for (std::size_t k = 0; k < max_iter; ++k) {
        QFunction next = apply_S_rs(dp, g, params);
        if (kappa) assert_increasing(dp, next);
        double d = 0.0;
        if (kappa) {
            for (std::size_t x = 0; x < dp.n_states; ++x)
                for (std::size_t a = 0; a < dp.n_actions; ++a)
                    if (dp.is_feasible(x, a))
                        d = std::max(d, std::fabs(next(x, a) - g(x, a)) / kappa->kappa[x]);
        } else {
            d = sup_norm_diff(dp, next, g);
        }
        distances.push_back(d);
        g = std::move(next);
        if (d <= stop)
            return {std::move(g),
                    make_convergence_report(std::move(distances), modulus, StopReason::tolerance)};
    }
    return {std::move(g),
            make_convergence_report(std::move(distances), modulus, StopReason::max_iter)};
}

std::vector<double> sigma_value_rs(const DynamicProgram& dp, const Policy& sigma,
                                   const RiskParams& params, std::size_t horizon) {
    params.validate();
    if (sigma.choice.size() != dp.n_states)
        throw std::invalid_argument("sigma_value_rs: policy size mismatch");
    for (std::size_t x = 0; x < dp.n_states; ++x)
        if (!dp.is_feasible(x, sigma.choice[x]))
            throw std::invalid_argument("sigma_value_rs: infeasible policy");
    std::vector<double> v = r_bar(dp), next(dp.n_states);
    for (std::size_t t = 0; t < horizon; ++t) {
        for (std::size_t x = 0; x < dp.n_states; ++x) {
            const std::size_t a = sigma.choice[x];
            double rv = dp.r(x, a);
            double cont = entropic_expectation({dp.kernel_row(x, a), dp.n_states}, v,
                                               params.gamma, dp.beta);
            next[x] = (rv == neg_inf || cont == neg_inf) ? neg_inf : rv + cont;
        }
        v.swap(next);
    }
    return v;
}

}  // namespace qtdp
