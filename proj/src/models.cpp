#include "qtdp/models.hpp"

#include <cmath>
#include <stdexcept>

namespace qtdp {

double CrraUtility::operator()(double c) const {
    if (c < 0.0) return neg_inf;
    if (c == 0.0) return gamma_u >= 1.0 ? neg_inf : 0.0;
    if (gamma_u == 1.0) return std::log(c);
    return std::pow(c, 1.0 - gamma_u) / (1.0 - gamma_u);
}

std::vector<double> GridSpec::make() const {
    if (n == 0) throw std::invalid_argument("GridSpec: empty grid");
    if (n == 1) return {lo};
    if (!(hi > lo)) throw std::invalid_argument("GridSpec: need hi > lo");
    std::vector<double> g(n);
    if (log_spacing) {
        if (!(lo > 0.0)) throw std::invalid_argument("GridSpec: log spacing needs lo > 0");
        const double step = (std::log(hi) - std::log(lo)) / (n - 1);
        for (std::size_t i = 0; i < n; ++i) g[i] = std::exp(std::log(lo) + step * i);
        g.back() = hi;
    } else {
        const double step = (hi - lo) / (n - 1);
        for (std::size_t i = 0; i < n; ++i) g[i] = lo + step * i;
        g.back() = hi;
    }
    return g;
}

namespace {
constexpr double kFeasEps = 1e-12;
}

DynamicProgram build_optimal_savings(const SavingsConfig& cfg) {
    const auto w_grid = cfg.wealth.make();
    const auto c_grid = cfg.consumption.make();
    cfg.chain.validate();
    const std::size_t nw = w_grid.size(), nc = c_grid.size(), nz = cfg.chain.n;
    if (!(cfg.min_saving >= 0.0))
        throw std::invalid_argument("build_optimal_savings: need min_saving >= 0");
    if (c_grid.front() > w_grid.front() - cfg.min_saving + kFeasEps)
        throw std::invalid_argument("build_optimal_savings: smallest consumption unaffordable at the smallest wealth");

    DynamicProgram dp;
    dp.n_states = nw * nz;
    dp.n_actions = nc;
    dp.beta = cfg.beta;
    dp.feasible.assign(dp.n_states * nc, 0);
    dp.reward.assign(dp.n_states * nc, neg_inf);
    for (std::size_t iw = 0; iw < nw; ++iw)
        for (std::size_t iz = 0; iz < nz; ++iz) {
            const std::size_t x = savings_state(iw, iz, nz);
            dp.state_labels.push_back({w_grid[iw], static_cast<double>(iz)});
            for (std::size_t ic = 0; ic < nc; ++ic)
                if (c_grid[ic] <= w_grid[iw] - cfg.min_saving + kFeasEps) {
                    dp.feasible[x * nc + ic] = 1;
                    dp.reward[x * nc + ic] =
                        cfg.linear_utility ? c_grid[ic] : cfg.utility(c_grid[ic]);
                }
        }
    for (double c : c_grid) dp.action_labels.push_back({c});

    dp.kernel = compose_kernel(
        w_grid, nc, cfg.chain, {cfg.income_shock, cfg.return_shock},
        [&](std::size_t ix, std::size_t, std::size_t ia, std::size_t jz,
            std::span<const double> xi) {
            const double saved = std::max(w_grid[ix] - c_grid[ia], 0.0);
            return cfg.gross_return * xi[1] * saved + cfg.chain.values[jz] * xi[0];
        });
    dp.validate();
    return dp;
}

DynamicProgram build_optimal_default(const DefaultConfig& cfg) {
    if (!(cfg.borrowing_limit > 0.0))
        throw std::invalid_argument("build_optimal_default: need b > 0");
    const auto w_grid = cfg.assets.make();
    if (w_grid.front() < -cfg.borrowing_limit - kFeasEps)
        throw std::invalid_argument("build_optimal_default: asset grid below borrowing limit");
    cfg.chain.validate();
    cfg.income_shock.validate();
    const std::size_t nw = w_grid.size(), nq = cfg.income_shock.size(), nz = cfg.chain.n;
    const double R = cfg.gross_return;
    const auto& u = cfg.utility;

    DynamicProgram dp;
    dp.n_states = 2 * nw * nq * nz;
    dp.n_actions = 1 + nw;  // 0: default / stay excluded, k: continue with w' = grid[k-1]
    dp.beta = cfg.beta;
    dp.feasible.assign(dp.n_states * dp.n_actions, 0);
    dp.reward.assign(dp.n_states * dp.n_actions, neg_inf);
    dp.kernel.assign(dp.n_states * dp.n_actions * dp.n_states, 0.0);
    dp.state_labels.resize(dp.n_states);
    dp.action_labels.push_back({0.0, 0.0});
    for (std::size_t k = 0; k < nw; ++k) dp.action_labels.push_back({1.0, w_grid[k]});

    auto income = [&](std::size_t iz, std::size_t jy) {
        return cfg.chain.values[iz] * cfg.income_shock.nodes[jy];
    };
    for (std::size_t regime = 0; regime < 2; ++regime)
        for (std::size_t iw = 0; iw < nw; ++iw)
            for (std::size_t jy = 0; jy < nq; ++jy)
                for (std::size_t iz = 0; iz < nz; ++iz) {
                    const std::size_t x = default_state(regime, iw, jy, iz, nw, nq, nz);
                    const double w = w_grid[iw];
                    const double y = income(iz, jy);
                    dp.state_labels[x] = {static_cast<double>(regime), w, y,
                                          static_cast<double>(iz)};
                    // action 0: default (active) or stay excluded; both pay u(y)
                    dp.feasible[x * dp.n_actions] = 1;
                    dp.reward[x * dp.n_actions] = u(y);
                    {
                        double* row = dp.kernel.data() + x * dp.n_actions * dp.n_states;
                        for (std::size_t jz = 0; jz < nz; ++jz)
                            for (std::size_t ky = 0; ky < nq; ++ky)
                                row[default_state(1, iw, ky, jz, nw, nq, nz)] +=
                                    cfg.chain.p(iz, jz) * cfg.income_shock.weights[ky];
                    }
                    if (regime == 1) continue;  // exclusion is absorbing
                    for (std::size_t k = 0; k < nw; ++k) {
                        const double wn = w_grid[k];
                        if (wn > R * (w + y) + kFeasEps) continue;
                        const std::size_t a = 1 + k;
                        dp.feasible[x * dp.n_actions + a] = 1;
                        dp.reward[x * dp.n_actions + a] = u(w + y - wn / R);
                        double* row =
                            dp.kernel.data() + (x * dp.n_actions + a) * dp.n_states;
                        for (std::size_t jz = 0; jz < nz; ++jz)
                            for (std::size_t ky = 0; ky < nq; ++ky)
                                row[default_state(0, k, ky, jz, nw, nq, nz)] +=
                                    cfg.chain.p(iz, jz) * cfg.income_shock.weights[ky];
                    }
                }
    dp.validate();
    return dp;
}

DynamicProgram build_job_search(const JobSearchConfig& cfg) {
    cfg.chain.validate();
    cfg.wage_shock.validate();
    cfg.outside_shock.validate();
    const std::size_t nz = cfg.chain.n;
    if (cfg.wage_levels.size() != nz || cfg.outside_levels.size() != nz)
        throw std::invalid_argument("build_job_search: per-z level vectors must match the chain");
    const std::size_t nw = cfg.wage_shock.size(), nc = cfg.outside_shock.size();
    const auto& u = cfg.utility;

    DynamicProgram dp;
    dp.n_states = 2 * nw * nc * nz;
    dp.n_actions = 2;  // 0: accept / stay employed, 1: continue searching
    dp.beta = cfg.beta;
    dp.feasible.assign(dp.n_states * 2, 0);
    dp.reward.assign(dp.n_states * 2, neg_inf);
    dp.kernel.assign(dp.n_states * 2 * dp.n_states, 0.0);
    dp.state_labels.resize(dp.n_states);
    dp.action_labels = {{0.0}, {1.0}};

    auto wage = [&](std::size_t iz, std::size_t iw) {
        return cfg.wage_levels[iz] * cfg.wage_shock.nodes[iw];
    };
    auto outside = [&](std::size_t iz, std::size_t ic) {
        return cfg.outside_levels[iz] * cfg.outside_shock.nodes[ic];
    };
    for (std::size_t regime = 0; regime < 2; ++regime)
        for (std::size_t iw = 0; iw < nw; ++iw)
            for (std::size_t ic = 0; ic < nc; ++ic)
                for (std::size_t iz = 0; iz < nz; ++iz) {
                    const std::size_t x = job_state(regime, iw, ic, iz, nw, nc, nz);
                    dp.state_labels[x] = {static_cast<double>(regime), wage(iz, iw),
                                          outside(iz, ic), static_cast<double>(iz)};
                    // accept (or stay employed): absorbing job at the current wage
                    dp.feasible[x * 2] = 1;
                    dp.reward[x * 2] = u(wage(iz, iw));
                    dp.kernel[(x * 2) * dp.n_states + job_state(1, iw, ic, iz, nw, nc, nz)] =
                        1.0;
                    if (regime == 1) continue;
                    dp.feasible[x * 2 + 1] = 1;
                    dp.reward[x * 2 + 1] = u(outside(iz, ic));
                    double* row = dp.kernel.data() + (x * 2 + 1) * dp.n_states;
                    for (std::size_t jz = 0; jz < nz; ++jz)
                        for (std::size_t jw = 0; jw < nw; ++jw)
                            for (std::size_t jc = 0; jc < nc; ++jc)
                                row[job_state(0, jw, jc, jz, nw, nc, nz)] +=
                                    cfg.chain.p(iz, jz) * cfg.wage_shock.weights[jw] *
                                    cfg.outside_shock.weights[jc];
                }
    dp.validate();
    return dp;
}

DynamicProgram build_savings_labor(const SavingsLaborConfig& cfg) {
    const auto w_grid = cfg.wealth.make();
    const auto c_grid = cfg.consumption.make();
    const auto l_grid = cfg.labor.make();
    cfg.chain.validate();
    if (l_grid.front() < 0.0 || l_grid.back() > 1.0)
        throw std::invalid_argument("build_savings_labor: labor grid must lie in [0,1]");
    const std::size_t nw = w_grid.size(), nc = c_grid.size(), nl = l_grid.size(),
                      nz = cfg.chain.n;

    DynamicProgram dp;
    dp.n_states = nw * nz;
    dp.n_actions = nc * nl;
    dp.beta = cfg.beta;
    dp.feasible.assign(dp.n_states * dp.n_actions, 0);
    dp.reward.assign(dp.n_states * dp.n_actions, neg_inf);
    for (std::size_t ic = 0; ic < nc; ++ic)
        for (std::size_t il = 0; il < nl; ++il)
            dp.action_labels.push_back({c_grid[ic], l_grid[il]});
    for (std::size_t iw = 0; iw < nw; ++iw)
        for (std::size_t iz = 0; iz < nz; ++iz) {
            const std::size_t x = savings_state(iw, iz, nz);
            const double y = cfg.chain.values[iz];
            dp.state_labels.push_back({w_grid[iw], static_cast<double>(iz)});
            bool any = false;
            for (std::size_t ic = 0; ic < nc; ++ic)
                for (std::size_t il = 0; il < nl; ++il) {
                    if (c_grid[ic] > w_grid[iw] + y * l_grid[il] + kFeasEps) continue;
                    const std::size_t a = ic * nl + il;
                    dp.feasible[x * dp.n_actions + a] = 1;
                    dp.reward[x * dp.n_actions + a] =
                        cfg.utility(c_grid[ic]) - cfg.labor_weight * l_grid[il];
                    any = true;
                }
            if (!any)
                throw std::invalid_argument(
                    "build_savings_labor: no feasible (c,l) at some state; widen the grids");
        }

    dp.kernel = compose_kernel(
        w_grid, dp.n_actions, cfg.chain, {cfg.return_shock},
        [&](std::size_t ix, std::size_t iz, std::size_t ia, std::size_t,
            std::span<const double> xi) {
            const double c = c_grid[ia / nl];
            const double l = l_grid[ia % nl];
            const double base = std::max(w_grid[ix] - c + cfg.chain.values[iz] * l, 0.0);
            return cfg.gross_return * xi[0] * base;
        });
    dp.validate();
    return dp;
}

DynamicProgram build_portfolio(const PortfolioConfig& cfg) {
    const auto w_grid = cfg.wealth.make();
    const auto c_grid = cfg.consumption.make();
    cfg.chain.validate();
    const std::size_t nw = w_grid.size(), nc = c_grid.size(), nz = cfg.chain.n;
    const std::size_t nt = cfg.portfolios.size();
    const std::size_t n_assets = cfg.asset_returns.size();
    if (nt == 0 || n_assets == 0)
        throw std::invalid_argument("build_portfolio: need portfolios and asset returns");
    if (cfg.theta_sets.size() != nz || cfg.risky.size() != n_assets)
        throw std::invalid_argument("build_portfolio: inconsistent portfolio spec");
    if (c_grid.front() > w_grid.front() + kFeasEps)
        throw std::invalid_argument("build_portfolio: smallest consumption exceeds smallest wealth");

    auto gross = [&](std::size_t it, std::size_t jz, double xi) {
        double r = 0.0;
        for (std::size_t j = 0; j < n_assets; ++j)
            r += cfg.portfolios[it][j] * cfg.asset_returns[j][jz] * (cfg.risky[j] ? xi : 1.0);
        return r;
    };

    DynamicProgram dp;
    dp.n_states = nw * nz;
    dp.n_actions = nt * nc;
    dp.beta = cfg.beta;
    dp.feasible.assign(dp.n_states * dp.n_actions, 0);
    dp.reward.assign(dp.n_states * dp.n_actions, neg_inf);
    for (std::size_t it = 0; it < nt; ++it)
        for (std::size_t ic = 0; ic < nc; ++ic)
            dp.action_labels.push_back({static_cast<double>(it), c_grid[ic]});
    for (std::size_t iw = 0; iw < nw; ++iw)
        for (std::size_t iz = 0; iz < nz; ++iz) {
            const std::size_t x = savings_state(iw, iz, nz);
            dp.state_labels.push_back({w_grid[iw], static_cast<double>(iz)});
            for (std::size_t it : cfg.theta_sets[iz])
                for (std::size_t ic = 0; ic < nc; ++ic)
                    if (c_grid[ic] <= w_grid[iw] + kFeasEps) {
                        dp.feasible[x * dp.n_actions + it * nc + ic] = 1;
                        dp.reward[x * dp.n_actions + it * nc + ic] = cfg.utility(c_grid[ic]);
                    }
        }

    dp.kernel = compose_kernel(
        w_grid, dp.n_actions, cfg.chain, {cfg.shock},
        [&](std::size_t ix, std::size_t, std::size_t ia, std::size_t jz,
            std::span<const double> xi) {
            const double c = c_grid[ia % nc];
            const double saved = std::max(w_grid[ix] - c, 0.0);
            return gross(ia / nc, jz, xi[0]) * saved + cfg.chain.values[jz];
        });
    dp.validate();
    return dp;
}

BuiltGrowthModel build_rs_growth(const GrowthConfig& cfg) {
    if (!(cfg.eta > 0.0)) throw std::invalid_argument("build_rs_growth: need eta > 0");
    const double beta_cap = cfg.eta <= 1.0 ? 1.0 : 1.0 / cfg.eta;
    if (!(cfg.beta > 0.0 && cfg.beta < beta_cap))
        throw std::invalid_argument("build_rs_growth: beta outside the admissible range for eta");
    const auto x_grid = cfg.capital.make();
    if (!(cfg.investment_floor >= 0.0) || cfg.investment_floor >= cfg.capital.lo)
        throw std::invalid_argument("build_rs_growth: investment floor must sit in [0, capital.lo)");
    GridSpec invest{cfg.capital.n, cfg.investment_floor, cfg.capital.hi, false};
    const auto a_grid = invest.make();
    ShockQuadrature eps = lognormal_quadrature(cfg.shock_mu, cfg.shock_sigma, cfg.shock_nodes);

    BuiltGrowthModel out;
    DynamicProgram& dp = out.dp;
    dp.n_states = x_grid.size();
    dp.n_actions = a_grid.size();
    dp.beta = cfg.beta;
    dp.feasible.assign(dp.n_states * dp.n_actions, 0);
    dp.reward.assign(dp.n_states * dp.n_actions, neg_inf);
    for (std::size_t i = 0; i < dp.n_states; ++i) {
        dp.state_labels.push_back({x_grid[i]});
        for (std::size_t j = 0; j < dp.n_actions; ++j)
            if (a_grid[j] <= x_grid[i] + kFeasEps) {
                dp.feasible[i * dp.n_actions + j] = 1;
                dp.reward[i * dp.n_actions + j] =
                    cfg.utility(std::max(x_grid[i] - a_grid[j], 0.0));
            }
    }
    for (double a : a_grid) dp.action_labels.push_back({a});

    dp.kernel = compose_kernel(x_grid, dp.n_actions, MarkovChain::trivial(), {eps},
                               [&](std::size_t, std::size_t, std::size_t ia, std::size_t,
                                   std::span<const double> xi) {
                                   return cfg.eta * a_grid[ia] + xi[0];
                               });
    dp.validate();

    out.risk = RiskParams{cfg.gamma_risk};
    out.alpha = cfg.eta <= 1.0 ? 0.5 * (1.0 + 1.0 / cfg.beta) : cfg.eta;
    const double shift = eps.mean() / (out.alpha - 1.0);
    out.kappa.kappa.resize(dp.n_states);
    for (std::size_t i = 0; i < dp.n_states; ++i) out.kappa.kappa[i] = x_grid[i] + shift;
    out.kappa.validate(dp.n_states);
    return out;
}

}  // namespace qtdp
