#include <stdexcept>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "qtdp/oracle.hpp"
#include "qtdp/risk_sensitive.hpp"

using namespace qtdp;

namespace {

QFunction random_increasing(const DynamicProgram& dp, std::mt19937_64& rng,
                            double scale = 1.0) {
    // increasing in the state index for each action column
    std::uniform_real_distribution<double> u(0.0, scale);
    QFunction g = QFunction::zeros(dp);
    for (std::size_t a = 0; a < dp.n_actions; ++a) {
        double level = -scale;
        for (std::size_t x = 0; x < dp.n_states; ++x) {
            level += u(rng);
            g.at(x, a) = level;
        }
    }
    return g;
}

}  // namespace

TEST_CASE("entropic_expectation: degenerate, constant, lognormal log values") {
    std::vector<double> point{1.0};
    std::vector<double> val{2.5};
    CHECK(entropic_expectation(point, val, 3.0, 0.9) == doctest::Approx(0.9 * 2.5).epsilon(1e-14));

    std::vector<double> dist{0.3, 0.7};
    std::vector<double> c{-1.25, -1.25};
    CHECK(entropic_expectation(dist, c, 0.5, 0.8) == doctest::Approx(0.8 * -1.25).epsilon(1e-12));

    const double mu = 0.0, sigma = 0.1, gamma = 2.0;
    ShockQuadrature q = lognormal_quadrature(mu, sigma, 15);
    std::vector<double> logs;
    for (double n : q.nodes) logs.push_back(std::log(n));
    const double got = entropic_expectation(q.weights, logs, gamma, 0.9);
    CHECK(std::fabs(got - 0.9 * (mu - gamma * sigma * sigma / 2.0)) <= 1e-6);

    std::vector<double> with_inf{neg_inf, 0.0};
    CHECK(entropic_expectation(dist, with_inf, 1.0, 0.9) == neg_inf);
}

TEST_CASE("apply_S_rs: discounting, deterministic equivalence, small-gamma limit") {
    DynamicProgram dp = fixtures::growth().dp;
    RiskParams risk{2.0};
    std::mt19937_64 rng(21);
    QFunction g = random_increasing(dp, rng);
    QFunction sg = apply_S_rs(dp, g, risk);
    for (double K : {0.25, 5.0}) {
        QFunction gk = g;
        for (double& v : gk.values) v += K;
        QFunction sgk = apply_S_rs(dp, gk, risk);
        for (auto [x, a] : feasible_pairs(dp))
            CHECK(std::fabs(sgk(x, a) - sg(x, a) - dp.beta * K) <= 1e-10);
    }

    // deterministic kernels: certainty equivalent collapses to the expectation
    DynamicProgram det;
    det.n_states = 2;
    det.n_actions = 1;
    det.beta = 0.5;
    det.feasible = {1, 1};
    det.reward = {0.3, 1.1};
    det.kernel = {0.0, 1.0, 1.0, 0.0};
    QFunction h{2, 1, {0.4, -0.2}};
    for (double gamma : {0.5, 2.0, 10.0}) {
        QFunction a = apply_S_rs(det, h, RiskParams{gamma});
        QFunction b = apply_S(det, h);
        for (std::size_t i = 0; i < a.values.size(); ++i)
            CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-12));
    }

    QFunction tiny = apply_S_rs(dp, g, RiskParams{1e-6});
    QFunction add = apply_S(dp, g);
    for (auto [x, a] : feasible_pairs(dp))
        CHECK(std::fabs(tiny(x, a) - add(x, a)) <= 1e-4);
}

TEST_CASE("r_hat_rs: constants, growth lower bound, small-gamma limit") {
    DynamicProgram flat;
    flat.n_states = 2;
    flat.n_actions = 1;
    flat.beta = 0.9;
    flat.feasible = {1, 1};
    flat.reward = {0.7, 0.7};
    flat.kernel = {0.5, 0.5, 0.5, 0.5};
    for (double v : r_hat_rs(flat, RiskParams{2.0})) CHECK(v == doctest::Approx(0.7));

    const DynamicProgram gdp = fixtures::growth().dp;
    const std::vector<double> rh = r_hat_rs(gdp, RiskParams{2.0});
    const double bound = 0.0 - 2.0 * 0.1 * 0.1 / 2.0;  // mu - gamma sigma^2 / 2
    for (auto [x, a] : feasible_pairs(gdp))
        CHECK(rh[x * gdp.n_actions + a] >= bound);
    CHECK(check_assumption_one_rs(gdp, RiskParams{2.0}).holds);

    const std::vector<double> rh_tiny = r_hat_rs(gdp, RiskParams{1e-6});
    const std::vector<double> rh_add = r_hat(gdp);
    for (auto [x, a] : feasible_pairs(gdp))
        CHECK(std::fabs(rh_tiny[x * gdp.n_actions + a] - rh_add[x * gdp.n_actions + a]) <=
              1e-4);
}

TEST_CASE("verify_monotone_assumptions: growth passes, counterexamples detected") {
    CHECK(verify_monotone_assumptions(fixtures::growth().dp).all());

    DynamicProgram dec;
    dec.n_states = 2;
    dec.n_actions = 1;
    dec.beta = 0.5;
    dec.feasible = {1, 1};
    dec.reward = {1.0, 0.0};  // decreasing in x
    dec.kernel = {0.5, 0.5, 0.5, 0.5};
    CHECK_FALSE(verify_monotone_assumptions(dec).reward_increasing);

    DynamicProgram anti = dec;
    anti.reward = {0.0, 1.0};
    anti.kernel = {0.0, 1.0, 1.0, 0.0};  // upper state jumps down: FOSD fails
    CHECK_FALSE(verify_monotone_assumptions(anti).kernel_monotone);
}

TEST_CASE("solve_fixed_point_rs: zero rewards and both growth branches") {
    DynamicProgram z;
    z.n_states = 2;
    z.n_actions = 1;
    z.beta = 0.9;
    z.feasible = {1, 1};
    z.reward = {0.0, 0.0};
    z.kernel = {0.5, 0.5, 0.5, 0.5};
    for (double gamma : {0.5, 4.0}) {
        auto [g, rep] = solve_fixed_point_rs(z, RiskParams{gamma}, std::nullopt,
                                             QFunction::zeros(z));
        for (double v : g.values) CHECK(std::fabs(v) <= 1e-10);
    }

    // eta <= 1 branch: alpha is the midpoint of (1, 1/beta)
    GrowthConfig cfg;
    cfg.utility = {1.0};
    cfg.beta = 0.95;
    cfg.eta = 1.0;
    cfg.capital = {25, 0.5, 6.0, true};
    cfg.shock_nodes = 7;
    cfg.gamma_risk = 2.0;
    BuiltGrowthModel mid = build_rs_growth(cfg);
    CHECK(mid.alpha == doctest::Approx(0.5 * (1.0 + 1.0 / 0.95)));
    WeightedCertificate cert = certify_assumption_three(mid.dp, mid.kappa);
    CHECK(cert.holds);
    auto [g1, rep1] = solve_fixed_point_rs(mid.dp, mid.risk, mid.kappa,
                                           QFunction::zeros(mid.dp), 1e-8);
    CHECK(rep1.stop_reason == StopReason::tolerance);
    CHECK(rep1.measured_modulus <= cert.alpha_beta + 1e-9);

    // eta > 1 branch used by the main fixture
    BuiltGrowthModel big = fixtures::growth();
    CHECK(big.alpha == doctest::Approx(1.2));
    auto [g2, rep2] = solve_fixed_point_rs(big.dp, big.risk, big.kappa,
                                           QFunction::zeros(big.dp));
    CHECK(rep2.measured_modulus <=
          certify_assumption_three(big.dp, big.kappa).alpha_beta + 1e-9);

    // gamma -> 0 recovers the additive fixed point in the kappa norm
    auto [g_tiny, rep_t] = solve_fixed_point_rs(big.dp, RiskParams{1e-6}, big.kappa,
                                                QFunction::zeros(big.dp));
    auto [g_add, rep_a] = solve_fixed_point(big.dp, QFunction::zeros(big.dp));
    QFunction diff = g_tiny;
    for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] -= g_add.values[i];
    CHECK(kappa_norm(big.dp, diff, big.kappa) <= 1e-4);
}

TEST_CASE("sigma_value_rs: base case, deterministic tail, enumeration optimum") {
    BuiltGrowthModel built = fixtures::growth();
    Policy lowest{std::vector<std::size_t>(built.dp.n_states, 0)};
    CHECK(sigma_value_rs(built.dp, lowest, built.risk, 0) == r_bar(built.dp));

    DynamicProgram det;
    det.n_states = 2;
    det.n_actions = 1;
    det.beta = 0.6;
    det.feasible = {1, 1};
    det.reward = {0.2, 1.0};
    det.kernel = {0.0, 1.0, 1.0, 0.0};
    Policy sigma{{0, 0}};
    const std::size_t h = 12;
    const std::vector<double> rs = sigma_value_rs(det, sigma, RiskParams{3.0}, h);
    const std::vector<double> add = sigma_value(det, sigma, h - 1);
    double rmax = 0.0;
    for (double v : r_bar(det)) rmax = std::max(rmax, std::fabs(v));
    for (std::size_t x = 0; x < 2; ++x)
        CHECK(std::fabs(rs[x] - add[x]) <= std::pow(det.beta, (double)h) * rmax + 1e-12);

    // micro growth instance: enumerated policies cannot beat the fixed point
    GrowthConfig cfg;
    cfg.utility = {1.0};
    cfg.beta = 0.8;
    cfg.eta = 1.2;
    cfg.capital = {4, 0.7, 3.0, true};
    cfg.investment_floor = 0.5;
    cfg.shock_nodes = 3;
    cfg.gamma_risk = 2.0;
    BuiltGrowthModel micro = build_rs_growth(cfg);
    auto [g, rep] = solve_fixed_point_rs(micro.dp, micro.risk, micro.kappa,
                                         QFunction::zeros(micro.dp));
    const std::vector<double> v = recover_value(micro.dp, g);
    const std::size_t H = 200;
    double rmax2 = 0.0;
    for (double r : r_bar(micro.dp)) rmax2 = std::max(rmax2, std::fabs(r));
    const double tail = std::pow(micro.dp.beta, (double)H) * 2.0 * rmax2 / (1.0 - micro.dp.beta);
    std::vector<double> best(micro.dp.n_states, neg_inf);
    for (const Policy& s : qtdp::oracle::enumerate_policies(micro.dp)) {
        const std::vector<double> vs = sigma_value_rs(micro.dp, s, micro.risk, H);
        for (std::size_t x = 0; x < micro.dp.n_states; ++x)
            best[x] = std::max(best[x], vs[x]);
    }
    for (std::size_t x = 0; x < micro.dp.n_states; ++x)
        CHECK(std::fabs(best[x] - v[x]) <= tail + 1e-6);
}

TEST_CASE("operator orderings: Jensen, gamma-monotonicity, operator monotonicity") {
    DynamicProgram dp = fixtures::growth().dp;
    std::mt19937_64 rng(31);
    for (int k = 0; k < 10; ++k) {
        QFunction g = random_increasing(dp, rng);
        QFunction s_add = apply_S(dp, g);
        QFunction s1 = apply_S_rs(dp, g, RiskParams{0.5});
        QFunction s2 = apply_S_rs(dp, g, RiskParams{3.0});
        for (auto [x, a] : feasible_pairs(dp)) {
            CHECK(s1(x, a) <= s_add(x, a) + 1e-12);
            CHECK(s2(x, a) <= s1(x, a) + 1e-12);
        }
        QFunction g_hi = g;
        std::uniform_real_distribution<double> bump(0.0, 0.5);
        for (auto [x, a] : feasible_pairs(dp)) g_hi.at(x, a) += bump(rng);
        QFunction s_lo = apply_S_rs(dp, g, RiskParams{2.0});
        QFunction s_hi = apply_S_rs(dp, g_hi, RiskParams{2.0});
        for (auto [x, a] : feasible_pairs(dp)) CHECK(s_lo(x, a) <= s_hi(x, a) + 1e-12);
    }
}

TEST_CASE("FKG subadditivity and monotone invariance on the certified model") {
    DynamicProgram dp = fixtures::growth().dp;
    REQUIRE(verify_monotone_assumptions(dp).all());
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const RiskParams risk{2.0};
    for (int k = 0; k < 100; ++k) {
        // random increasing per-state functions
        std::vector<double> h1(dp.n_states), h2(dp.n_states);
        double a1 = -2.0, a2 = -2.0;
        for (std::size_t x = 0; x < dp.n_states; ++x) {
            a1 += u(rng);
            a2 += u(rng);
            h1[x] = a1;
            h2[x] = a2;
        }
        std::vector<double> sum(dp.n_states);
        for (std::size_t x = 0; x < dp.n_states; ++x) sum[x] = h1[x] + h2[x];
        for (auto [x, a] : feasible_pairs(dp)) {
            std::span<const double> row{dp.kernel_row(x, a), dp.n_states};
            const double lhs = entropic_expectation(row, sum, risk.gamma, dp.beta);
            const double rhs = entropic_expectation(row, h1, risk.gamma, dp.beta) +
                               entropic_expectation(row, h2, risk.gamma, dp.beta);
            CHECK(lhs <= rhs + 1e-10);
        }
    }

    QFunction g = random_increasing(dp, rng);
    QFunction sg = apply_S_rs(dp, g, risk);
    for (std::size_t x = 0; x + 1 < dp.n_states; ++x)
        for (std::size_t a = 0; a < dp.n_actions; ++a)
            if (dp.is_feasible(x, a) && dp.is_feasible(x + 1, a))
                CHECK(sg(x + 1, a) >= sg(x, a) - 1e-10);
}

TEST_CASE("fixed point satisfies the certainty-equivalent recovery identity") {
    BuiltGrowthModel built = fixtures::growth();
    auto [g, rep] = solve_fixed_point_rs(built.dp, built.risk, built.kappa,
                                         QFunction::zeros(built.dp));
    const std::vector<double> v = recover_value(built.dp, g);
    for (auto [x, a] : feasible_pairs(built.dp)) {
        std::span<const double> row{built.dp.kernel_row(x, a), built.dp.n_states};
        const double w = entropic_expectation(row, v, built.risk.gamma, built.dp.beta);
        CHECK(std::fabs(w - g(x, a)) <= 1e-7);
    }
}
