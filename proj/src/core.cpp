#include "qtdp/core.hpp"

#include <cmath>
#include <stdexcept>

namespace qtdp {

namespace {
constexpr double kRowSumTol = 1e-12;
}

void DynamicProgram::validate() const {
    if (n_states == 0 || n_actions == 0)
        throw std::invalid_argument("DynamicProgram: empty state or action space");
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("DynamicProgram: beta must lie in (0,1)");
    if (feasible.size() != n_states * n_actions)
        throw std::invalid_argument("DynamicProgram: feasible table has wrong size");
    if (reward.size() != n_states * n_actions)
        throw std::invalid_argument("DynamicProgram: reward table has wrong size");
    if (kernel.size() != n_states * n_actions * n_states)
        throw std::invalid_argument("DynamicProgram: kernel table has wrong size");
    if (!state_labels.empty() && state_labels.size() != n_states)
        throw std::invalid_argument("DynamicProgram: state_labels size mismatch");
    if (!action_labels.empty() && action_labels.size() != n_actions)
        throw std::invalid_argument("DynamicProgram: action_labels size mismatch");

    for (std::size_t x = 0; x < n_states; ++x) {
        bool any = false;
        for (std::size_t a = 0; a < n_actions; ++a) {
            if (!is_feasible(x, a)) continue;
            any = true;
            double rv = r(x, a);
            if (std::isnan(rv) || rv == pos_inf)
                throw std::invalid_argument("DynamicProgram: reward must be finite or -inf");
            const double* row = kernel_row(x, a);
            long double sum = 0.0L;
            for (std::size_t y = 0; y < n_states; ++y) {
                if (row[y] < 0.0 || std::isnan(row[y]))
                    throw std::invalid_argument("DynamicProgram: kernel entries must be >= 0");
                sum += row[y];
            }
            if (std::fabs(static_cast<double>(sum) - 1.0) > kRowSumTol)
                throw std::invalid_argument("DynamicProgram: kernel row does not sum to 1");
        }
        if (!any)
            throw std::invalid_argument("DynamicProgram: state with no feasible action");
    }
}

std::vector<std::pair<std::size_t, std::size_t>> feasible_pairs(const DynamicProgram& dp) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t x = 0; x < dp.n_states; ++x)
        for (std::size_t a = 0; a < dp.n_actions; ++a)
            if (dp.is_feasible(x, a)) out.emplace_back(x, a);
    return out;
}

std::vector<double> r_bar(const DynamicProgram& dp) {
    std::vector<double> out(dp.n_states, neg_inf);
    for (std::size_t x = 0; x < dp.n_states; ++x)
        for (std::size_t a = 0; a < dp.n_actions; ++a)
            if (dp.is_feasible(x, a) && dp.r(x, a) > out[x]) out[x] = dp.r(x, a);
    return out;
}

double expect_row(const double* row, std::span<const double> values) {
    long double acc = 0.0L;
    for (std::size_t y = 0; y < values.size(); ++y) {
        if (row[y] == 0.0) continue;
        if (values[y] == neg_inf) return neg_inf;
        acc += static_cast<long double>(row[y]) * values[y];
    }
    return static_cast<double>(acc);
}

std::vector<double> r_hat(const DynamicProgram& dp) {
    const std::vector<double> rb = r_bar(dp);
    std::vector<double> out(dp.n_states * dp.n_actions, 0.0);
    for (std::size_t x = 0; x < dp.n_states; ++x)
        for (std::size_t a = 0; a < dp.n_actions; ++a)
            if (dp.is_feasible(x, a))
                out[x * dp.n_actions + a] = expect_row(dp.kernel_row(x, a), rb);
    return out;
}

AssumptionOneReport check_assumption_one(const DynamicProgram& dp) {
    AssumptionOneReport rep;
    const std::vector<double> rb = r_bar(dp);
    for (double v : rb)
        if (v > rep.sup_rbar) rep.sup_rbar = v;
    const std::vector<double> rh = r_hat(dp);
    for (std::size_t x = 0; x < dp.n_states; ++x)
        for (std::size_t a = 0; a < dp.n_actions; ++a)
            if (dp.is_feasible(x, a) && rh[x * dp.n_actions + a] < rep.inf_rhat)
                rep.inf_rhat = rh[x * dp.n_actions + a];
    rep.holds = rep.sup_rbar < pos_inf && rep.inf_rhat > neg_inf;
    return rep;
}

}  // namespace qtdp
