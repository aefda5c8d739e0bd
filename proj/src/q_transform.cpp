#include "qtdp/q_transform.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace qtdp {

double sup_norm_diff(const DynamicProgram& dp, const QFunction& g1, const QFunction& g2) {
    double m = 0.0;
    for (std::size_t x = 0; x < dp.n_states; ++x)
        for (std::size_t a = 0; a < dp.n_actions; ++a)
            if (dp.is_feasible(x, a)) {
                double d = std::fabs(g1(x, a) - g2(x, a));
                if (d > m) m = d;
            }
    return m;
}

std::vector<double> recover_value(const DynamicProgram& dp, const QFunction& g) {
    std::vector<double> v(dp.n_states, neg_inf);
    for (std::size_t x = 0; x < dp.n_states; ++x)
        for (std::size_t a = 0; a < dp.n_actions; ++a)
            if (dp.is_feasible(x, a)) {
                double val = dp.r(x, a) + g(x, a);
                if (val > v[x]) v[x] = val;
            }
    return v;
}

namespace {

QFunction apply_S_impl(const DynamicProgram& dp, const QFunction& g, bool parallel) {
    const std::vector<double> m = recover_value(dp, g);
    QFunction out = QFunction::zeros(dp);
    const std::size_t total = dp.n_states * dp.n_actions;
    bool diverged = false;
#pragma omp parallel for schedule(static) if (parallel)
    for (std::size_t idx = 0; idx < total; ++idx) {
        const std::size_t x = idx / dp.n_actions;
        const std::size_t a = idx % dp.n_actions;
        if (!dp.is_feasible(x, a)) continue;
        double e = expect_row(dp.kernel_row(x, a), m);
        if (e == neg_inf) {
            diverged = true;
            continue;
        }
        out.values[idx] = dp.beta * e;
    }
    if (diverged)
        throw std::runtime_error(
            "apply_S: inner max is -inf on a state with positive reachable mass");
    return out;
}

}  // namespace

QFunction apply_S(const DynamicProgram& dp, const QFunction& g) {
    return apply_S_impl(dp, g, true);
}

QFunction apply_S_serial(const DynamicProgram& dp, const QFunction& g) {
    return apply_S_impl(dp, g, false);
}

// Steps below this fraction of the initial step are roundoff-dominated and
// excluded from the measured modulus (the absolute-slack decay check in the
// tests still covers them).
double resolvable_floor(double d0) { return 1e-5 * std::max(1.0, d0); }

ConvergenceReport make_convergence_report(std::vector<double> distances, double modulus,
                                          StopReason reason) {
    ConvergenceReport rep;
    rep.iterations = distances.size();
    rep.stop_reason = reason;
    double floor = distances.empty() ? 0.0 : resolvable_floor(distances.front());
    double mm = 0.0;
    for (std::size_t k = 0; k + 1 < distances.size(); ++k)
        if (distances[k] >= floor && distances[k] > 0.0)
            mm = std::max(mm, distances[k + 1] / distances[k]);
    rep.measured_modulus = mm;
    rep.certified_error =
        distances.empty() ? 0.0 : modulus * distances.back() / (1.0 - modulus);
    rep.distances = std::move(distances);
    return rep;
}

std::pair<QFunction, ConvergenceReport> solve_fixed_point(const DynamicProgram& dp,
                                                          const QFunction& g0, double tol,
                                                          std::size_t max_iter) {
    if (!(tol > 0.0)) throw std::invalid_argument("solve_fixed_point: tol must be > 0");
    if (!check_assumption_one(dp).holds)
        throw std::runtime_error("solve_fixed_point: assumption check failed (r_hat unbounded below)");
    const double stop = tol * (1.0 - dp.beta) / dp.beta;
    QFunction g = g0;
    std::vector<double> distances;
    for (std::size_t k = 0; k < max_iter; ++k) {
        QFunction next = apply_S(dp, g);
        double d = sup_norm_diff(dp, next, g);
        distances.push_back(d);
        g = std::move(next);
        if (d <= stop)
            return {std::move(g),
                    make_convergence_report(std::move(distances), dp.beta, StopReason::tolerance)};
    }
    return {std::move(g), make_convergence_report(std::move(distances), dp.beta, StopReason::max_iter)};
}

Policy greedy_policy(const DynamicProgram& dp, const QFunction& g) {
    Policy p;
    p.choice.resize(dp.n_states);
    for (std::size_t x = 0; x < dp.n_states; ++x) {
        double best = neg_inf;
        std::size_t best_a = dp.n_actions;
        for (std::size_t a = 0; a < dp.n_actions; ++a) {
            if (!dp.is_feasible(x, a)) continue;
            double val = dp.r(x, a) + g(x, a);
            if (val > best) {
                best = val;
                best_a = a;
            } else if (best_a == dp.n_actions) {
                best_a = a;  // first feasible action even if its value is -inf so far
            }
        }
        if (best == neg_inf)
            throw std::runtime_error("greedy_policy: every feasible entry is -inf at a state");
        p.choice[x] = best_a;
    }
    return p;
}

double measure_contraction(const DynamicProgram& dp, std::size_t trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("measure_contraction: trials must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    double worst = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        QFunction g1 = QFunction::zeros(dp), g2 = QFunction::zeros(dp);
        for (auto& v : g1.values) v = unif(rng);
        for (auto& v : g2.values) v = unif(rng);
        double denom = sup_norm_diff(dp, g1, g2);
        if (denom == 0.0) continue;
        double num = sup_norm_diff(dp, apply_S(dp, g1), apply_S(dp, g2));
        worst = std::max(worst, num / denom);
    }
    return worst;
}

std::vector<double> sigma_value(const DynamicProgram& dp, const Policy& sigma,
                                std::size_t horizon) {
    if (sigma.choice.size() != dp.n_states)
        throw std::invalid_argument("sigma_value: policy size mismatch");
    for (std::size_t x = 0; x < dp.n_states; ++x)
        if (!dp.is_feasible(x, sigma.choice[x]))
            throw std::invalid_argument("sigma_value: infeasible policy");
    std::vector<double> v(dp.n_states, 0.0), next(dp.n_states);
    for (std::size_t t = 0; t <= horizon; ++t) {
        for (std::size_t x = 0; x < dp.n_states; ++x) {
            const std::size_t a = sigma.choice[x];
            double rv = dp.r(x, a);
            if (rv == neg_inf) {
                next[x] = neg_inf;
                continue;
            }
            double cont = expect_row(dp.kernel_row(x, a), v);
            next[x] = cont == neg_inf ? neg_inf : rv + dp.beta * cont;
        }
        v.swap(next);
    }
    return v;
}

double sigma_value_tail(const DynamicProgram& dp, std::size_t horizon) {
    double m = 0.0;
    for (std::size_t x = 0; x < dp.n_states; ++x)
        for (std::size_t a = 0; a < dp.n_actions; ++a)
            if (dp.is_feasible(x, a) && dp.r(x, a) != neg_inf)
                m = std::max(m, std::fabs(dp.r(x, a)));
    return std::pow(dp.beta, static_cast<double>(horizon) + 1.0) * m / (1.0 - dp.beta);
}

}  // namespace qtdp
