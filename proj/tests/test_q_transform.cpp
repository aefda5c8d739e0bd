#include <stdexcept>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "qtdp/oracle.hpp"
#include "qtdp/q_transform.hpp"

using namespace qtdp;

namespace {

DynamicProgram zero_reward(std::size_t n, double beta) {
    DynamicProgram dp;
    dp.n_states = n;
    dp.n_actions = 1;
    dp.beta = beta;
    dp.feasible.assign(n, 1);
    dp.reward.assign(n, 0.0);
    dp.kernel.assign(n * n, 1.0 / n);
    return dp;
}

QFunction random_q(const DynamicProgram& dp, std::mt19937_64& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    QFunction g = QFunction::zeros(dp);
    for (auto [x, a] : feasible_pairs(dp)) g.at(x, a) = u(rng);
    return g;
}

}  // namespace

TEST_CASE("apply_S: zero fixed point, discounting, hand-evaluated chain") {
    DynamicProgram z = zero_reward(3, 0.9);
    QFunction g0 = QFunction::zeros(z);
    CHECK(apply_S(z, g0).values == g0.values);

    QFunction gk = QFunction::constant(z, 4.0);
    for (double v : apply_S(z, gk).values) CHECK(v == doctest::Approx(0.9 * 4.0));

    // deterministic cycle 0 -> 1 -> 0, r(x) = x, beta = 0.5
    DynamicProgram dp;
    dp.n_states = 2;
    dp.n_actions = 1;
    dp.beta = 0.5;
    dp.feasible = {1, 1};
    dp.reward = {0.0, 1.0};
    dp.kernel = {0.0, 1.0, 1.0, 0.0};
    QFunction s = apply_S(dp, QFunction::zeros(dp));
    CHECK(s(0, 0) == doctest::Approx(0.5));
    CHECK(s(1, 0) == doctest::Approx(0.0));
}

TEST_CASE("apply_S refuses positive mass on a state whose rewards are all -inf") {
    DynamicProgram dp;
    dp.n_states = 2;
    dp.n_actions = 1;
    dp.beta = 0.5;
    dp.feasible = {1, 1};
    dp.reward = {1.0, neg_inf};
    dp.kernel = {0.5, 0.5, 0.0, 1.0};
    CHECK_THROWS_AS(apply_S(dp, QFunction::zeros(dp)), std::runtime_error);
}

TEST_CASE("discounting identity S(g + K) = Sg + beta K to 1e-12") {
    DynamicProgram dp = fixtures::savings();
    std::mt19937_64 rng(1);
    QFunction g = random_q(dp, rng, 3.0);
    QFunction sg = apply_S(dp, g);
    for (double K : {0.5, 2.0, 17.0}) {
        QFunction gk = g;
        for (double& v : gk.values) v += K;
        QFunction sgk = apply_S(dp, gk);
        for (auto [x, a] : feasible_pairs(dp))
            CHECK(std::fabs(sgk(x, a) - sg(x, a) - dp.beta * K) <= 1e-12);
    }
}

TEST_CASE("monotonicity and a-priori bounds of apply_S") {
    DynamicProgram dp = fixtures::portfolio();
    std::mt19937_64 rng(2);
    QFunction g1 = random_q(dp, rng, 2.0);
    QFunction g2 = g1;
    std::uniform_real_distribution<double> bump(0.0, 1.0);
    for (auto [x, a] : feasible_pairs(dp)) g2.at(x, a) += bump(rng);
    QFunction s1 = apply_S(dp, g1), s2 = apply_S(dp, g2);
    double rbar_max = neg_inf, rhat_min = pos_inf, gnorm = 0.0;
    for (double v : r_bar(dp)) rbar_max = std::max(rbar_max, v);
    const std::vector<double> rh = r_hat(dp);
    for (auto [x, a] : feasible_pairs(dp)) {
        rhat_min = std::min(rhat_min, rh[x * dp.n_actions + a]);
        gnorm = std::max(gnorm, std::fabs(g1(x, a)));
    }
    for (auto [x, a] : feasible_pairs(dp)) {
        CHECK(s1(x, a) <= s2(x, a) + 1e-12);
        CHECK(s1(x, a) <= dp.beta * (rbar_max + gnorm) + 1e-12);
        CHECK(s1(x, a) >= dp.beta * (rhat_min - gnorm) - 1e-12);
    }
}

TEST_CASE("contraction with modulus beta") {
    for (auto& [name, dp] : fixtures::all_models()) {
        CAPTURE(name);
        std::mt19937_64 rng(3);
        for (int k = 0; k < 20; ++k) {
            QFunction g1 = random_q(dp, rng, 5.0);
            QFunction g2 = random_q(dp, rng, 5.0);
            const double num = sup_norm_diff(dp, apply_S(dp, g1), apply_S(dp, g2));
            const double den = sup_norm_diff(dp, g1, g2);
            CHECK(num <= dp.beta * den + 1e-9);
        }
    }
}

TEST_CASE("measure_contraction: bound, exact self-loop ratio, reproducibility") {
    DynamicProgram dp = fixtures::savings();
    const double m = measure_contraction(dp, 100, 0);
    CHECK(m <= dp.beta + 1e-9);
    CHECK(m == measure_contraction(dp, 100, 0));

    DynamicProgram self;
    self.n_states = 1;
    self.n_actions = 1;
    self.beta = 0.7;
    self.feasible = {1};
    self.reward = {1.0};
    self.kernel = {1.0};
    CHECK(measure_contraction(self, 10, 1) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("solve_fixed_point: zero rewards, uniqueness, residual, geometric decay") {
    DynamicProgram z = zero_reward(4, 0.8);
    auto [gz, repz] = solve_fixed_point(z, QFunction::constant(z, 3.0));
    for (double v : gz.values) CHECK(std::fabs(v) <= 1e-10);

    DynamicProgram dp = fixtures::savings();
    const double tol = 1e-10;
    auto [ga, ra] = solve_fixed_point(dp, QFunction::zeros(dp), tol);
    auto [gb, rb] = solve_fixed_point(dp, QFunction::constant(dp, 17.0), tol);
    CHECK(sup_norm_diff(dp, ga, gb) <= 2 * tol);
    CHECK(ra.stop_reason == StopReason::tolerance);
    CHECK(sup_norm_diff(dp, apply_S(dp, ga), ga) <= tol * (1 - dp.beta) / dp.beta);
    for (std::size_t k = 0; k + 1 < ra.distances.size(); ++k)
        CHECK(ra.distances[k + 1] <= dp.beta * ra.distances[k] + 1e-12);
    CHECK(ra.measured_modulus <= dp.beta + 1e-9);
    CHECK(ra.certified_error ==
          doctest::Approx(dp.beta * ra.distances.back() / (1 - dp.beta)));
}

TEST_CASE("solve_fixed_point reports max_iter without converging") {
    DynamicProgram dp = fixtures::savings();
    auto [g, rep] = solve_fixed_point(dp, QFunction::zeros(dp), 1e-10, 3);
    CHECK(rep.stop_reason == StopReason::max_iter);
    CHECK(rep.iterations == 3);
}

TEST_CASE("solve_fixed_point refuses a failing boundedness check") {
    DynamicProgram dp;
    dp.n_states = 2;
    dp.n_actions = 1;
    dp.beta = 0.5;
    dp.feasible = {1, 1};
    dp.reward = {1.0, neg_inf};
    dp.kernel = {0.5, 0.5, 0.0, 1.0};
    CHECK_THROWS(solve_fixed_point(dp, QFunction::zeros(dp)));
}

TEST_CASE("greedy_policy: forced choices and the lowest-index tie rule") {
    DynamicProgram dp = zero_reward(2, 0.5);
    Policy p = greedy_policy(dp, QFunction::zeros(dp));
    CHECK(p.choice == std::vector<std::size_t>{0, 0});

    DynamicProgram tie;
    tie.n_states = 1;
    tie.n_actions = 4;
    tie.beta = 0.5;
    tie.feasible = {0, 1, 0, 1};
    tie.reward = {0.0, 2.0, 0.0, 2.0};
    tie.kernel = std::vector<double>(4, 1.0);
    CHECK(greedy_policy(tie, QFunction::zeros(tie)).choice[0] == 1);
}

TEST_CASE("recover_value is consistent with the fixed point") {
    DynamicProgram dp = fixtures::job_search();
    auto [g, rep] = solve_fixed_point(dp, QFunction::zeros(dp));
    const std::vector<double> v = recover_value(dp, g);
    for (auto [x, a] : feasible_pairs(dp)) {
        const double e = dp.beta * expect_row(dp.kernel_row(x, a), v);
        CHECK(std::fabs(e - g(x, a)) <= 1e-8);
    }
}

TEST_CASE("cake-eating solve matches the closed form on a small grid") {
    DynamicProgram dp = fixtures::cake(50);
    auto [g, rep] = solve_fixed_point(dp, QFunction::zeros(dp));
    Policy p = greedy_policy(dp, g);
    const std::vector<double> v = recover_value(dp, g);
    std::vector<double> w_grid;
    for (auto& lab : dp.state_labels) w_grid.push_back(lab[0]);
    auto sol = qtdp::oracle::cake_eating_closed_form(0.95, 1.0 / 0.95, w_grid);
    for (std::size_t x = 0; x < dp.n_states; ++x) {
        const double c = dp.action_labels[p.choice[x]][0];
        CHECK(c == doctest::Approx(0.05 * w_grid[x]).epsilon(1e-9));
        CHECK(std::fabs(v[x] - sol.value[x]) <= 1e-6);
    }
}

TEST_CASE("sigma_value: base cases and geometric series") {
    DynamicProgram dp = fixtures::micro_chain();
    Policy sigma{{0, 1}};
    const std::vector<double> v0 = sigma_value(dp, sigma, 0);
    CHECK(v0[0] == dp.r(0, 0));
    CHECK(v0[1] == dp.r(1, 1));

    DynamicProgram ones = zero_reward(3, 0.9);
    ones.reward.assign(3, 1.0);
    const std::size_t N = 25;
    const std::vector<double> v = sigma_value(ones, Policy{{0, 0, 0}}, N);
    const double series = (1.0 - std::pow(0.9, N + 1)) / 0.1;
    for (double x : v) CHECK(x == doctest::Approx(series).epsilon(1e-12));
}

TEST_CASE("enumerated policy maximum equals the recovered value") {
    for (const DynamicProgram& dp :
         {fixtures::micro_chain(), fixtures::micro_savings(), fixtures::micro_growth()}) {
        auto [g, rep] = solve_fixed_point(dp, QFunction::zeros(dp));
        const std::vector<double> v = recover_value(dp, g);
        const std::size_t H = 300;
        const double tail = sigma_value_tail(dp, H);
        std::vector<double> best(dp.n_states, neg_inf);
        for (const Policy& sigma : qtdp::oracle::enumerate_policies(dp)) {
            const std::vector<double> vs = sigma_value(dp, sigma, H);
            for (std::size_t x = 0; x < dp.n_states; ++x)
                best[x] = std::max(best[x], vs[x]);
        }
        for (std::size_t x = 0; x < dp.n_states; ++x)
            CHECK(std::fabs(best[x] - v[x]) <= tail + 1e-7);
    }
}

TEST_CASE("parallel and serial operator applications agree bitwise") {
    for (auto& [name, dp] : fixtures::all_models()) {
        CAPTURE(name);
        std::mt19937_64 rng(4);
        QFunction g = random_q(dp, rng, 2.0);
        CHECK(apply_S(dp, g).values == apply_S_serial(dp, g).values);
    }
}
