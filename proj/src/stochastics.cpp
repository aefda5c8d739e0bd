#include "qtdp/stochastics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qtdp {

void MarkovChain::validate() const {
    if (n == 0 || transition.size() != n * n || values.size() != n)
        throw std::invalid_argument("MarkovChain: inconsistent sizes");
    for (std::size_t i = 0; i < n; ++i) {
        long double sum = 0.0L;
        for (std::size_t j = 0; j < n; ++j) {
            if (p(i, j) < 0.0 || std::isnan(p(i, j)))
                throw std::invalid_argument("MarkovChain: entries must be >= 0");
            sum += p(i, j);
        }
        if (std::fabs(static_cast<double>(sum) - 1.0) > 1e-12)
            throw std::invalid_argument("MarkovChain: row does not sum to 1");
    }
}

void ShockQuadrature::validate() const {
    if (nodes.empty() || nodes.size() != weights.size())
        throw std::invalid_argument("ShockQuadrature: inconsistent sizes");
    long double sum = 0.0L;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!std::isfinite(nodes[i]))
            throw std::invalid_argument("ShockQuadrature: nodes must be finite");
        if (weights[i] < 0.0 || std::isnan(weights[i]))
            throw std::invalid_argument("ShockQuadrature: weights must be >= 0");
        sum += weights[i];
    }
    if (std::fabs(static_cast<double>(sum) - 1.0) > 1e-12)
        throw std::invalid_argument("ShockQuadrature: weights do not sum to 1");
}

double ShockQuadrature::mean() const {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += (long double)weights[i] * nodes[i];
    return static_cast<double>(acc);
}

// Roots of the physicists' Hermite polynomial by Newton iteration on the
// three-term recurrence, largest root first, symmetric pairs filled in.
void gauss_hermite(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("gauss_hermite: need n >= 1");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const double pim4 = 0.7511255444649425;  // pi^{-1/4}
    const std::size_t m = (n + 1) / 2;
    double z = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        else if (i == 1)
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * nodes[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * nodes[1];
        else
            z = 2.0 * z - nodes[i - 2];
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = pim4, p2 = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 -
                     std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            double z1 = z;
            z = z1 - p1 / pp;
            if (std::fabs(z - z1) <= 1e-15 * std::max(1.0, std::fabs(z))) break;
        }
        nodes[i] = z;
        nodes[n - 1 - i] = -z;
        weights[i] = 2.0 / (pp * pp);
        weights[n - 1 - i] = weights[i];
    }
    std::reverse(nodes.begin(), nodes.end());  // ascending
    std::reverse(weights.begin(), weights.end());
}

namespace {
ShockQuadrature gh_mapped(double mu, double sigma, std::size_t n_nodes, bool log_scale,
                          std::string tag) {
    if (n_nodes < 1) throw std::invalid_argument("quadrature: need n_nodes >= 1");
    if (!(sigma > 0.0)) throw std::invalid_argument("quadrature: need sigma > 0");
    std::vector<double> t, w;
    gauss_hermite(n_nodes, t, w);
    ShockQuadrature q;
    q.description = std::move(tag);
    q.nodes.resize(n_nodes);
    q.weights.resize(n_nodes);
    const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);
    long double wsum = 0.0L;
    for (std::size_t i = 0; i < n_nodes; ++i) {
        double x = mu + sigma * std::sqrt(2.0) * t[i];
        q.nodes[i] = log_scale ? std::exp(x) : x;
        q.weights[i] = w[i] * inv_sqrt_pi;
        wsum += q.weights[i];
    }
    // renormalize away the quadrature's own rounding so rows stay stochastic
    for (double& wi : q.weights) wi /= static_cast<double>(wsum);
    return q;
}
}  // namespace

ShockQuadrature lognormal_quadrature(double mu, double sigma, std::size_t n_nodes) {
    return gh_mapped(mu, sigma, n_nodes, true, "lognormal");
}

ShockQuadrature normal_quadrature(double mu, double sigma, std::size_t n_nodes) {
    return gh_mapped(mu, sigma, n_nodes, false, "normal");
}

ShockQuadrature uniform_quadrature(double lo, double hi, std::size_t n_nodes) {
    if (n_nodes < 1) throw std::invalid_argument("quadrature: need n_nodes >= 1");
    if (!(hi >= lo)) throw std::invalid_argument("uniform_quadrature: need hi >= lo");
    ShockQuadrature q;
    q.description = "uniform";
    for (std::size_t i = 0; i < n_nodes; ++i) {
        q.nodes.push_back(lo + (hi - lo) * (i + 0.5) / n_nodes);
        q.weights.push_back(1.0 / n_nodes);
    }
    return q;
}

ShockQuadrature degenerate_shock(double value) {
    return ShockQuadrature{{value}, {1.0}, "degenerate"};
}

ShockQuadrature discrete_shock(std::vector<double> nodes, std::vector<double> weights) {
    ShockQuadrature q{std::move(nodes), std::move(weights), "discrete"};
    q.validate();
    return q;
}

GridLottery project_to_grid(double value, std::span<const double> grid) {
    if (grid.empty()) throw std::invalid_argument("project_to_grid: empty grid");
    const std::size_t last = grid.size() - 1;
    if (value <= grid[0]) return {0, 0, 1.0, 0.0};
    if (value >= grid[last]) return {last, last, 1.0, 0.0};
    std::size_t hi = std::upper_bound(grid.begin(), grid.end(), value) - grid.begin();
    std::size_t lo = hi - 1;
    if (grid[lo] == value) return {lo, lo, 1.0, 0.0};
    double w_hi = (value - grid[lo]) / (grid[hi] - grid[lo]);
    return {lo, hi, 1.0 - w_hi, w_hi};
}

std::vector<double> compose_kernel(const std::vector<double>& endo_grid,
                                   std::size_t n_actions,
                                   const MarkovChain& chain,
                                   const std::vector<ShockQuadrature>& shocks,
                                   const LawOfMotion& law) {
    chain.validate();
    if (shocks.empty()) throw std::invalid_argument("compose_kernel: need at least one shock");
    for (const auto& s : shocks) s.validate();

    // enumerate the product quadrature
    std::vector<std::vector<double>> node_tuples{{}};
    std::vector<double> tuple_weights{1.0};
    for (const auto& s : shocks) {
        std::vector<std::vector<double>> nt;
        std::vector<double> tw;
        for (std::size_t t = 0; t < node_tuples.size(); ++t)
            for (std::size_t k = 0; k < s.size(); ++k) {
                auto tuple = node_tuples[t];
                tuple.push_back(s.nodes[k]);
                nt.push_back(std::move(tuple));
                tw.push_back(tuple_weights[t] * s.weights[k]);
            }
        node_tuples = std::move(nt);
        tuple_weights = std::move(tw);
    }

    const std::size_t nw = endo_grid.size();
    const std::size_t nz = chain.n;
    const std::size_t ns = nw * nz;
    std::vector<double> kernel(ns * n_actions * ns, 0.0);
    for (std::size_t ix = 0; ix < nw; ++ix) {
        for (std::size_t iz = 0; iz < nz; ++iz) {
            const std::size_t x = ix * nz + iz;
            for (std::size_t ia = 0; ia < n_actions; ++ia) {
                double* row = kernel.data() + (x * n_actions + ia) * ns;
                for (std::size_t jz = 0; jz < nz; ++jz) {
                    const double pz = chain.p(iz, jz);
                    if (pz == 0.0) continue;
                    for (std::size_t k = 0; k < node_tuples.size(); ++k) {
                        double next = law(ix, iz, ia, jz, node_tuples[k]);
                        if (std::isnan(next))
                            throw std::invalid_argument("compose_kernel: law of motion returned NaN");
                        GridLottery lot = project_to_grid(next, endo_grid);
                        const double mass = pz * tuple_weights[k];
                        row[lot.lo * nz + jz] += mass * lot.w_lo;
                        if (lot.hi != lot.lo) row[lot.hi * nz + jz] += mass * lot.w_hi;
                    }
                }
            }
        }
    }
    return kernel;
}

}  // namespace qtdp
