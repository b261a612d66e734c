#include "cfmimo/power_control.hpp"

#include "cfmimo/lsfd.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cfmimo {

double PowerAllocation::min_sinr() const
{
    return sinr.empty() ? 0.0 : *std::min_element(sinr.begin(), sinr.end());
}

namespace {

void check_problem(const PowerControlProblem &p, std::size_t n_eta)
{
    if (!p.stats)
        throw std::invalid_argument("power control: statistics missing");
    if (n_eta != static_cast<std::size_t>(p.stats->K))
        throw std::invalid_argument("power control: one power per UE required");
    if (p.mode == LsfdMode::Level3NOpt && (!p.sets || static_cast<int>(p.sets->size()) != p.stats->K))
        throw std::invalid_argument("power control: interference sets required in n-opt mode");
    if (p.mode == LsfdMode::Level2 && !p.dcc)
        throw std::invalid_argument("power control: DCC required in level2 mode");
}

void check_served(const UeStatistics &u)
{
    if (u.size() == 0 || u.g_mean().squaredNorm() == 0.0)
        throw DegenerateStatisticsError("UE " + std::to_string(u.ue) + " has zero mean useful channel", u.ue);
}

IterationRecord summarize(int iteration, const std::vector<double> &s)
{
    const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
    return {iteration, *lo, *hi, std::abs(*hi - *lo) / std::abs(*hi)};
}

} // namespace

std::vector<double> sinr_per_unit_power(const PowerControlProblem &p, std::span<const double> eta)
{
    check_problem(p, eta.size());
    const int K = p.stats->K;
    std::vector<double> t(K);
    for (int k = 0; k < K; ++k) {
        const auto &u = p.stats->ue[k];
        check_served(u);
        switch (p.mode) {
        case LsfdMode::Level3Opt: {
            const CVec m = u.g_mean();
            HermitianSolver solver(interference_matrix(u, eta));
            if (!solver.ok())
                throw DegenerateStatisticsError("singular interference matrix for UE " + std::to_string(k), k);
            t[k] = m.dot(solver.solve(m)).real();
            break;
        }
        case LsfdMode::Level3NOpt: {
            const CVec m = u.g_mean();
            const auto &S = (*p.sets)[k];
            HermitianSolver solver(static_cast<int>(S.size()) == K ? interference_matrix(u, eta)
                                                                    : interference_matrix(u, eta, S));
            if (!solver.ok())
                throw DegenerateStatisticsError("singular interference matrix for UE " + std::to_string(k), k);
            t[k] = m.dot(solver.solve(m)).real();
            break;
        }
        case LsfdMode::Level2: {
            const CVec a = level2_weights(k, *p.dcc);
            const CMat C = interference_matrix(u, eta);
            t[k] = std::norm(a.dot(u.g_mean())) / (a.adjoint() * C * a)(0, 0).real();
            break;
        }
        }
    }
    return t;
}

std::vector<double> monitored_sinr(const PowerControlProblem &p, std::span<const double> eta)
{
    auto t = sinr_per_unit_power(p, eta);
    for (std::size_t k = 0; k < t.size(); ++k)
        t[k] *= eta[k];
    return t;
}

namespace {

std::vector<double> update_from(const std::vector<double> &per_unit, double rho_u)
{
    std::vector<double> eta(per_unit.size());
    for (std::size_t k = 0; k < eta.size(); ++k)
        eta[k] = 1.0 / per_unit[k];
    const auto top = std::max_element(eta.begin(), eta.end());
    const double peak = *top;
    for (auto &e : eta)
        e = e / peak * rho_u;
    *top = rho_u;
    return eta;
}

} // namespace

std::vector<double> fixed_point_step(const PowerControlProblem &p, std::span<const double> eta_prev)
{
    for (double e : eta_prev)
        if (!(e > 0))
            throw std::invalid_argument("fixed_point_step: powers must be strictly positive");
    return update_from(sinr_per_unit_power(p, eta_prev), p.rho_u);
}

PowerAllocation maxmin_fixed_point(const PowerControlProblem &p, const FixedPointOptions &opts)
{
    if (!(opts.tol > 0) || opts.max_iters < 1)
        throw std::invalid_argument("maxmin_fixed_point: tol must be positive and max_iters >= 1");
    check_problem(p, static_cast<std::size_t>(p.stats ? p.stats->K : 0));
    const int K = p.stats->K;

    PowerAllocation out;
    std::vector<double> eta = opts.initial.value_or(std::vector<double>(K, p.rho_u));
    if (static_cast<int>(eta.size()) != K)
        throw std::invalid_argument("maxmin_fixed_point: initial powers have wrong size");
    for (double e : eta)
        if (!(e > 0))
            throw std::invalid_argument("maxmin_fixed_point: initial powers must be strictly positive");

    auto per_unit = sinr_per_unit_power(p, eta);
    for (int j = 1; j <= opts.max_iters; ++j) {
        eta = update_from(per_unit, p.rho_u);
        per_unit = sinr_per_unit_power(p, eta);
        std::vector<double> s(K);
        for (int k = 0; k < K; ++k)
            s[k] = eta[k] * per_unit[k];
        out.history.push_back(summarize(j, s));
        out.iterations = j;
        out.sinr = std::move(s);
        if (out.history.back().spread <= opts.tol) {
            out.converged = true;
            break;
        }
    }
    out.eta = std::move(eta);
    return out;
}

PowerAllocation grid_search_oracle(const PowerControlProblem &p, int grid_n)
{
    check_problem(p, static_cast<std::size_t>(p.stats ? p.stats->K : 0));
    const int K = p.stats->K;
    if (K > kGridOracleMaxUes)
        throw std::invalid_argument("grid_search_oracle: at most " + std::to_string(kGridOracleMaxUes) +
                                    " UEs supported");
    if (grid_n < 1)
        throw std::invalid_argument("grid_search_oracle: grid_n must be >= 1");

    std::vector<int> idx(K, 1);
    std::vector<double> eta(K);
    PowerAllocation best;
    double best_min = -1.0;
    for (;;) {
        for (int k = 0; k < K; ++k)
            eta[k] = p.rho_u * idx[k] / grid_n;
        auto s = monitored_sinr(p, eta);
        const double mn = *std::min_element(s.begin(), s.end());
        if (mn > best_min) {
            best_min = mn;
            best.eta = eta;
            best.sinr = std::move(s);
        }
        int k = 0;
        while (k < K && idx[k] == grid_n)
            idx[k++] = 1;
        if (k == K)
            break;
        ++idx[k];
    }
    best.converged = true;
    best.history.push_back(summarize(0, best.sinr));
    return best;
}

std::string trace_csv(const PowerAllocation &alloc)
{
    std::ostringstream os;
    os.precision(17);
    os << "iteration,min_sinr,max_sinr,spread\n";
    for (const auto &r : alloc.history)
        os << r.iteration << ',' << r.min_sinr << ',' << r.max_sinr << ',' << r.spread << '\n';
    return os.str();
}

} // namespace cfmimo
