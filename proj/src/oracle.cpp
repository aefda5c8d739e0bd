#include "qtdp/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace qtdp::oracle {

TruncatedBellmanResult truncated_bellman(const DynamicProgram& dp, std::size_t horizon,
                                         double floor) {
    dp.validate();
    TruncatedBellmanResult res;
    res.floor = floor;
    double rmax = 0.0;
    for (std::size_t x = 0; x < dp.n_states; ++x)
        for (std::size_t a = 0; a < dp.n_actions; ++a)
            if (dp.is_feasible(x, a) && dp.r(x, a) != neg_inf)
                rmax = std::max(rmax, std::fabs(dp.r(x, a)));
    res.tail_bound = std::pow(dp.beta, static_cast<double>(horizon)) * rmax / (1.0 - dp.beta);

    std::vector<double> v(dp.n_states, 0.0), next(dp.n_states);
    for (std::size_t k = 0; k < horizon; ++k) {
        for (std::size_t x = 0; x < dp.n_states; ++x) {
            double best = neg_inf;
            for (std::size_t a = 0; a < dp.n_actions; ++a) {
                if (!dp.is_feasible(x, a)) continue;
                double r = dp.r(x, a);
                if (r == neg_inf) r = floor;
                const double* row = dp.kernel_row(x, a);
                double acc = 0.0;
                for (std::size_t y = 0; y < dp.n_states; ++y) acc += row[y] * v[y];
                best = std::max(best, r + dp.beta * acc);
            }
            next[x] = best;
        }
        v.swap(next);
    }
    res.v = std::move(v);
    return res;
}

std::vector<Policy> enumerate_policies(const DynamicProgram& dp) {
    std::vector<std::vector<std::size_t>> choices(dp.n_states);
    double count = 1.0;
    for (std::size_t x = 0; x < dp.n_states; ++x) {
        for (std::size_t a = 0; a < dp.n_actions; ++a)
            if (dp.is_feasible(x, a)) choices[x].push_back(a);
        count *= static_cast<double>(choices[x].size());
        if (count > 1e6)
            throw std::invalid_argument("enumerate_policies: more than 10^6 policies");
    }
    std::vector<Policy> out;
    out.reserve(static_cast<std::size_t>(count));
    std::vector<std::size_t> digit(dp.n_states, 0);
    while (true) {
        Policy p;
        p.choice.resize(dp.n_states);
        for (std::size_t x = 0; x < dp.n_states; ++x) p.choice[x] = choices[x][digit[x]];
        out.push_back(std::move(p));
        // mixed-radix increment, state 0 the slowest digit
        std::size_t x = dp.n_states;
        while (x > 0) {
            --x;
            if (++digit[x] < choices[x].size()) break;
            digit[x] = 0;
            if (x == 0) return out;
        }
    }
}

CakeEatingSolution cake_eating_closed_form(double beta, double R,
                                           const std::vector<double>& w_grid) {
    if (!(beta > 0.0 && beta < 1.0) || !(R > 0.0))
        throw std::invalid_argument("cake_eating_closed_form: need beta in (0,1), R > 0");
    CakeEatingSolution sol;
    const double level = beta * std::log(beta * R) / ((1.0 - beta) * (1.0 - beta));
    for (double w : w_grid) {
        if (!(w > 0.0))
            throw std::invalid_argument("cake_eating_closed_form: wealth must be positive");
        sol.value.push_back(std::log((1.0 - beta) * w) / (1.0 - beta) + level);
        sol.consumption.push_back((1.0 - beta) * w);
    }
    return sol;
}

ReservationWageResult reservation_wage(const std::function<double(double)>& u, double beta,
                                       const ShockQuadrature& wages, double outside_value) {
    wages.validate();
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("reservation_wage: need beta in (0,1)");
    auto rhs = [&](double g) {
        double acc = 0.0;
        for (std::size_t i = 0; i < wages.size(); ++i)
            acc += wages.weights[i] *
                   std::max(u(wages.nodes[i]) / (1.0 - beta), u(outside_value) + g);
        return beta * acc;
    };
    // rhs is a beta-contraction in g, so f(g) = rhs(g) - g crosses zero once
    double lo = 0.0, hi = 0.0;
    {
        double span = 1.0;
        while (rhs(lo) - lo < 0.0 && span < 1e18) { lo -= span; span *= 2.0; }
        span = 1.0;
        while (rhs(hi) - hi > 0.0 && span < 1e18) { hi += span; span *= 2.0; }
        if (rhs(lo) - lo < 0.0 || rhs(hi) - hi > 0.0)
            throw std::runtime_error("reservation_wage: bisection bracket failure");
    }
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (rhs(mid) - mid >= 0.0 ? lo : hi) = mid;
    }
    ReservationWageResult res;
    res.g = 0.5 * (lo + hi);
    res.threshold = wages.nodes.back();
    bool found = false;
    for (std::size_t i = 0; i < wages.size(); ++i)
        if (u(wages.nodes[i]) / (1.0 - beta) >= u(outside_value) + res.g) {
            if (!found || wages.nodes[i] < res.threshold) res.threshold = wages.nodes[i];
            found = true;
        }
    if (!found)
        throw std::runtime_error("reservation_wage: no wage node clears the threshold");
    return res;
}

std::vector<double> excluded_value(const MarkovChain& chain, const ShockQuadrature& income,
                                   const std::function<double(double)>& u, double beta) {
    chain.validate();
    income.validate();
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("excluded_value: need beta in (0,1)");
    const std::size_t nq = income.size(), nz = chain.n, n = nq * nz;
    // (I - beta * Q) v = u(y), Q((y,z),(y',z')) = chain(z,z') * income.weights[y']
    std::vector<double> A(n * n, 0.0), b(n);
    for (std::size_t jy = 0; jy < nq; ++jy)
        for (std::size_t iz = 0; iz < nz; ++iz) {
            const std::size_t row = jy * nz + iz;
            b[row] = u(chain.values[iz] * income.nodes[jy]);
            if (b[row] == neg_inf)
                throw std::invalid_argument("excluded_value: -inf flow utility");
            A[row * n + row] = 1.0;
            for (std::size_t ky = 0; ky < nq; ++ky)
                for (std::size_t jz = 0; jz < nz; ++jz)
                    A[row * n + (ky * nz + jz)] -= beta * chain.p(iz, jz) * income.weights[ky];
        }
    // Gaussian elimination with partial pivoting; the system is diagonally
    // dominant for beta < 1 so a zero pivot cannot occur.
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(A[r * n + col]) > std::fabs(A[piv * n + col])) piv = r;
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(A[col * n + c], A[piv * n + c]);
            std::swap(b[col], b[piv]);
        }
        const double d = A[col * n + col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = A[r * n + col] / d;
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) A[r * n + c] -= f * A[col * n + c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> v(n);
    for (std::size_t r = n; r-- > 0;) {
        double acc = b[r];
        for (std::size_t c = r + 1; c < n; ++c) acc -= A[r * n + c] * v[c];
        v[r] = acc / A[r * n + r];
    }
    return v;
}

}  // namespace qtdp::oracle
