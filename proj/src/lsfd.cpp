#include "cfmimo/lsfd.hpp"

#include "cfmimo/accounting.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cfmimo {

std::vector<int> interference_set(const DccAssignment &dcc, int k, int R, int N)
{
    const auto &Mk = dcc.serving_sets[k];
    const long threshold = static_cast<long>(N) * std::min<long>(R, static_cast<long>(Mk.size()));
    std::vector<int> S;
    for (int i = 0; i < dcc.K; ++i) {
        // sum_l tr(D_kl D_il) = N |M_k intersect M_i|
        const auto &Mi = dcc.serving_sets[i];
        long shared = 0;
        auto a = Mk.begin();
        auto b = Mi.begin();
        while (a != Mk.end() && b != Mi.end()) {
            if (*a < *b)
                ++a;
            else if (*b < *a)
                ++b;
            else {
                ++shared;
                ++a;
                ++b;
            }
        }
        if (static_cast<long>(N) * shared >= threshold)
            S.push_back(i);
    }
    return S;
}

std::vector<std::vector<int>> interference_sets(const DccAssignment &dcc, int R, int N)
{
    std::vector<std::vector<int>> sets;
    sets.reserve(dcc.K);
    for (int k = 0; k < dcc.K; ++k)
        sets.push_back(interference_set(dcc, k, R, N));
    return sets;
}

CMat interference_matrix(const UeStatistics &u, std::span<const double> eta,
                         std::optional<std::span<const int>> subset)
{
    const int m = u.size();
    const int K = static_cast<int>(u.cross_mean.cols());
    const int k = u.ue;
    CMat C = CMat::Zero(m, m);
    RVec diag = u.noise;

    auto add_ue = [&](int i) {
        if (i == k) {
            // eta_k (E{g_kk g_kk^H} - E{g_kk} E{g_kk}^H) is diagonal.
            diag += eta[k] * (u.second.col(k) - u.cross_mean.col(k).cwiseAbs2());
            return;
        }
        const CVec mu = u.cross_mean.col(i);
        C.noalias() += eta[i] * (mu * mu.adjoint());
        diag += eta[i] * u.second.col(i);
    };
    if (subset) {
        if (!std::binary_search(subset->begin(), subset->end(), k))
            throw std::invalid_argument("interference subset must contain UE " + std::to_string(k));
        for (int i : *subset)
            add_ue(i);
    } else {
        for (int i = 0; i < K; ++i)
            add_ue(i);
    }
    C.diagonal() = diag.cast<cd>();
    return C;
}

namespace {

HermitianSolver factor_or_throw(const CMat &C, int k)
{
    HermitianSolver solver(C);
    if (!solver.ok())
        throw DegenerateStatisticsError("interference matrix of UE " + std::to_string(k) +
                                            " is not positive definite",
                                        k);
    return solver;
}

LsfdVector solve_lsfd(const UeStatistics &u, std::span<const double> eta,
                      std::optional<std::span<const int>> subset)
{
    const CMat C = interference_matrix(u, eta, subset);
    const auto solver = factor_or_throw(C, u.ue);
    return {solver.solve(CVec(u.g_mean())), lsfd_complexity(u.size())};
}

} // namespace

LsfdVector optimal_lsfd(const LsfdStatistics &stats, std::span<const double> eta, int k)
{
    return solve_lsfd(stats.ue[k], eta, std::nullopt);
}

LsfdVector nearly_optimal_lsfd(const LsfdStatistics &stats, std::span<const double> eta, int k,
                               std::span<const int> interference_set)
{
    if (static_cast<int>(interference_set.size()) == stats.K)
        return solve_lsfd(stats.ue[k], eta, std::nullopt);
    return solve_lsfd(stats.ue[k], eta, interference_set);
}

double sinr(const LsfdStatistics &stats, std::span<const double> eta, int k, const CVec &a)
{
    const auto &u = stats.ue[k];
    if (a.size() != u.size())
        throw InvalidWeightsError("LSFD vector of UE " + std::to_string(k) + " has wrong dimension");
    const CMat C = interference_matrix(u, eta);
    const double den = (a.adjoint() * C * a)(0, 0).real();
    if (!(den > 0))
        throw InvalidWeightsError("LSFD vector of UE " + std::to_string(k) + " gives zero interference power");
    const double num = eta[k] * std::norm(a.dot(u.g_mean()));
    return num / den;
}

double optimal_sinr(const LsfdStatistics &stats, std::span<const double> eta, int k,
                    std::optional<std::span<const int>> subset)
{
    const auto &u = stats.ue[k];
    const CVec m = u.g_mean();
    const auto solver = factor_or_throw(interference_matrix(u, eta, subset), k);
    return eta[k] * m.dot(solver.solve(m)).real();
}

double se(double sinr_value, int tau_c, int tau_p)
{
    return static_cast<double>(tau_c - tau_p) / tau_c * std::log2(1.0 + sinr_value);
}

CVec level2_weights(int k, const DccAssignment &dcc)
{
    const auto m = static_cast<Eigen::Index>(dcc.serving_sets[k].size());
    if (m < 1)
        throw std::invalid_argument("level2_weights: UE " + std::to_string(k) + " has no serving AP");
    return CVec::Constant(m, cd(1.0 / static_cast<double>(m), 0.0));
}

} // namespace cfmimo
