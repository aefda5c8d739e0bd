#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qtdp {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();
inline constexpr double pos_inf = std::numeric_limits<double>::infinity();

/// A finite, discretized dynamic program: states, actions, feasibility mask,
/// extended-real rewards (-inf allowed, +inf forbidden), dense transition
/// kernel and discount factor. Immutable after construction; all operations
/// below are pure functions of their inputs.
struct DynamicProgram {
    std::size_t n_states = 0;
    std::size_t n_actions = 0;
    std::vector<std::uint8_t> feasible;  // n_states x n_actions, row-major
    std::vector<double> reward;          // n_states x n_actions, row-major
    std::vector<double> kernel;          // n_states x n_actions x n_states
    double beta = 0.0;
    std::vector<std::vector<double>> state_labels;   // optional
    std::vector<std::vector<double>> action_labels;  // optional

    bool is_feasible(std::size_t x, std::size_t a) const {
        return feasible[x * n_actions + a] != 0;
    }
    double r(std::size_t x, std::size_t a) const {
        return reward[x * n_actions + a];
    }
    const double* kernel_row(std::size_t x, std::size_t a) const {
        return kernel.data() + (x * n_actions + a) * n_states;
    }

    /// Throws std::invalid_argument on any violated invariant: empty feasible
    /// sets, non-stochastic kernel rows, +inf or NaN rewards, beta outside (0,1).
    void validate() const;
};

std::vector<std::pair<std::size_t, std::size_t>> feasible_pairs(const DynamicProgram& dp);

/// r_bar(x) = max over feasible a of r(x,a). -inf only when every feasible
/// reward at x is -inf.
std::vector<double> r_bar(const DynamicProgram& dp);

/// r_hat(x,a) = E_{x,a} r_bar(x'). Dense n_states x n_actions table; entries at
/// infeasible pairs are unspecified. -inf propagates from r_bar under positive mass.
std::vector<double> r_hat(const DynamicProgram& dp);

struct AssumptionOneReport {
    double sup_rbar = neg_inf;
    double inf_rhat = pos_inf;
    bool holds = false;
};

/// holds iff sup r_bar < +inf (structural here) and inf r_hat > -inf.
/// A failing report is valid output; solvers refuse to run on it.
AssumptionOneReport check_assumption_one(const DynamicProgram& dp);

/// Expectation of `values` under a probability row, with extended-real rules:
/// positive mass on a -inf value gives -inf. Accumulates in extended precision
/// so that contraction inequalities survive at tolerance scale.
double expect_row(const double* row, std::span<const double> values);

}  // namespace qtdp
