#include "qtdp/weighted.hpp"

#include <cmath>
#include <stdexcept>

namespace qtdp {

void WeightFunction::validate(std::size_t n_states) const {
    if (kappa.size() != n_states)
        throw std::invalid_argument("WeightFunction: size mismatch");
    for (double k : kappa)
        if (!(k >= 1.0) || !std::isfinite(k))
            throw std::invalid_argument("WeightFunction: kappa must be finite and >= 1");
}

double kappa_norm(const DynamicProgram& dp, const QFunction& g, const WeightFunction& kappa) {
    double m = 0.0;
    for (std::size_t x = 0; x < dp.n_states; ++x)
        for (std::size_t a = 0; a < dp.n_actions; ++a)
            if (dp.is_feasible(x, a))
                m = std::max(m, std::fabs(g(x, a)) / kappa.kappa[x]);
    return m;
}

namespace {
double kappa_norm_diff(const DynamicProgram& dp, const QFunction& g1, const QFunction& g2,
                       const WeightFunction& kappa) {
    double m = 0.0;
    for (std::size_t x = 0; x < dp.n_states; ++x)
        for (std::size_t a = 0; a < dp.n_actions; ++a)
            if (dp.is_feasible(x, a))
                m = std::max(m, std::fabs(g1(x, a) - g2(x, a)) / kappa.kappa[x]);
    return m;
}
}  // namespace

std::vector<double> kappa_hat(const DynamicProgram& dp, const WeightFunction& kappa) {
    kappa.validate(dp.n_states);
    std::vector<double> out(dp.n_states * dp.n_actions, 0.0);
    for (std::size_t x = 0; x < dp.n_states; ++x)
        for (std::size_t a = 0; a < dp.n_actions; ++a)
            if (dp.is_feasible(x, a))
                out[x * dp.n_actions + a] = expect_row(dp.kernel_row(x, a), kappa.kappa);
    return out;
}

WeightedCertificate certify_assumption_three(const DynamicProgram& dp,
                                             const WeightFunction& kappa) {
    kappa.validate(dp.n_states);
    WeightedCertificate cert;
    const std::vector<double> rb = r_bar(dp);
    double d = 0.0;
    for (std::size_t x = 0; x < dp.n_states; ++x)
        if (rb[x] != neg_inf) d = std::max(d, rb[x] / kappa.kappa[x]);
    const std::vector<double> kh = kappa_hat(dp, kappa);
    double alpha = 0.0;
    for (std::size_t x = 0; x < dp.n_states; ++x)
        for (std::size_t a = 0; a < dp.n_actions; ++a)
            if (dp.is_feasible(x, a))
                alpha = std::max(alpha, kh[x * dp.n_actions + a] / kappa.kappa[x]);
    cert.d = d;
    cert.alpha = alpha;
    cert.alpha_beta = alpha * dp.beta;
    cert.holds = std::isfinite(d) && cert.alpha_beta < 1.0;
    return cert;
}

std::pair<WeightFunction, WeightedCertificate> auto_weight_linear(const DynamicProgram& dp,
                                                                  double p, double q_init) {
    if (!(p > 0.0)) throw std::invalid_argument("auto_weight_linear: need p > 0");
    if (!(q_init > 1.0)) throw std::invalid_argument("auto_weight_linear: need q_init > 1");
    if (dp.state_labels.size() != dp.n_states)
        throw std::invalid_argument("auto_weight_linear: state labels with a wealth coordinate required");
    const double cap = std::ldexp(q_init, 40);
    for (double q = q_init; q <= cap; q *= 2.0) {
        WeightFunction kappa;
        kappa.kappa.resize(dp.n_states);
        bool ok = true;
        for (std::size_t x = 0; x < dp.n_states; ++x) {
            double k = p * dp.state_labels[x][0] + q;
            if (!(k >= 1.0)) ok = false;
            kappa.kappa[x] = k;
        }
        if (!ok) continue;
        WeightedCertificate cert = certify_assumption_three(dp, kappa);
        if (cert.holds) return {std::move(kappa), cert};
    }
    throw std::runtime_error("auto_weight_linear: no passing q below cap (alpha*beta >= 1?)");
}

std::pair<QFunction, ConvergenceReport> solve_fixed_point_weighted(
    const DynamicProgram& dp, const WeightFunction& kappa, const QFunction& g0, double tol,
    std::size_t max_iter) {
    if (!(tol > 0.0)) throw std::invalid_argument("solve_fixed_point_weighted: tol must be > 0");
    WeightedCertificate cert = certify_assumption_three(dp, kappa);
    if (!cert.holds)
        throw std::runtime_error("solve_fixed_point_weighted: weighted certificate does not hold");
    const std::vector<double> rh = r_hat(dp);
    for (std::size_t x = 0; x < dp.n_states; ++x)
        for (std::size_t a = 0; a < dp.n_actions; ++a)
            if (dp.is_feasible(x, a) && rh[x * dp.n_actions + a] == neg_inf)
                throw std::runtime_error("solve_fixed_point_weighted: r_hat unbounded below");
    const double modulus = cert.alpha_beta;
    const double stop = tol * (1.0 - modulus) / modulus;
    QFunction g = g0;
    std::vector<double> distances;
    for (std::size_t k = 0; k < max_iter; ++k) {
        QFunction next = apply_S(dp, g);
        double d = kappa_norm_diff(dp, next, g, kappa);
        distances.push_back(d);
        g = std::move(next);
        if (d <= stop)
            return {std::move(g),
                    make_convergence_report(std::move(distances), modulus, StopReason::tolerance)};
    }
    return {std::move(g),
            make_convergence_report(std::move(distances), modulus, StopReason::max_iter)};
}

}  // namespace qtdp
