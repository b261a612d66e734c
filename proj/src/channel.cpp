#include "cfmimo/channel.hpp"

#include <cmath>
#include <string>

namespace cfmimo {

CorrelationRoots correlation_roots(const NetworkSetup &setup)
{
    CorrelationRoots r;
    r.L = setup.L;
    r.K = setup.K;
    r.roots.reserve(setup.corr.size());
    for (const auto &R : setup.corr)
        r.roots.push_back(hermitian_sqrt(R));
    return r;
}

ChannelRealization sample_channels(const CorrelationRoots &roots, Engine &eng)
{
    ChannelRealization real;
    real.L = roots.L;
    real.K = roots.K;
    real.h.resize(roots.roots.size());
    for (std::size_t idx = 0; idx < roots.roots.size(); ++idx) {
        const CMat &S = roots.roots[idx];
        CVec w(S.cols());
        for (Eigen::Index n = 0; n < w.size(); ++n)
            w[n] = complex_normal(eng);
        real.h[idx] = S * w;
    }
    return real;
}

PilotStatistics pilot_sufficient_statistic(const ChannelRealization &real, const DccAssignment &dcc,
                                           const SimConfig &config, Engine &eng)
{
    PilotStatistics ps;
    ps.L = real.L;
    ps.tau_p = dcc.tau_p;
    const double amp = std::sqrt(config.tau_p * config.rho_p);
    const double noise_std = std::sqrt(config.sigma2);
    const Eigen::Index N = real.h.empty() ? config.N : real.h.front().size();
    ps.z.assign(static_cast<std::size_t>(dcc.tau_p) * real.L, CVec::Zero(N));
    for (int t = 0; t < dcc.tau_p; ++t) {
        for (int l = 0; l < real.L; ++l) {
            CVec &z = ps.z[static_cast<std::size_t>(t) * real.L + l];
            for (int i = 0; i < real.K; ++i)
                if (dcc.pilot_of[i] == t)
                    z += real.at(i, l);
            z *= amp;
            for (Eigen::Index n = 0; n < N; ++n)
                z[n] += noise_std * complex_normal(eng);
        }
    }
    return ps;
}

CMat pilot_covariance(const NetworkSetup &setup, const DccAssignment &dcc, const SimConfig &config,
                      int pilot, int ap)
{
    CMat psi = config.sigma2 * CMat::Identity(setup.N, setup.N);
    const double tp = config.tau_p * config.rho_p;
    for (int i = 0; i < setup.K; ++i)
        if (dcc.pilot_of[i] == pilot)
            psi += tp * setup.R(i, ap);
    make_hermitian(psi);
    return psi;
}

namespace {

HermitianSolver factor_psi(const CMat &psi, int pilot, int ap)
{
    HermitianSolver solver(psi, false);
    const auto where = " (pilot " + std::to_string(pilot) + ", AP " + std::to_string(ap) + ")";
    if (!solver.ok())
        throw EstimationError("pilot covariance not positive definite" + where, pilot, ap);
    if (solver.condition_estimate() > kMaxPsiCondition)
        throw EstimationError("pilot covariance numerically singular" + where, pilot, ap);
    return solver;
}

} // namespace

CVec mmse_estimate(const CVec &z, const CMat &R, const CMat &psi, double tau_p_rho_p, int pilot, int ap)
{
    const auto solver = factor_psi(psi, pilot, ap);
    return std::sqrt(tau_p_rho_p) * (R * solver.solve(z));
}

CMat error_covariance(const CMat &R, const CMat &psi, const SimConfig &config, int pilot, int ap)
{
    const auto solver = factor_psi(psi, pilot, ap);
    CMat C = R - (config.tau_p * config.rho_p) * (R * solver.solve(R));
    make_hermitian(C);
    return C;
}

EstimatorBank build_estimators(const NetworkSetup &setup, const DccAssignment &dcc, const SimConfig &config)
{
    EstimatorBank bank;
    bank.L = setup.L;
    bank.K = setup.K;
    bank.weight.resize(setup.K);
    bank.err_cov.resize(setup.K);
    const double tp = config.tau_p * config.rho_p;
    for (int k = 0; k < setup.K; ++k) {
        const int t = dcc.pilot_of[k];
        for (int l : dcc.serving_sets[k]) {
            const CMat psi = pilot_covariance(setup, dcc, config, t, l);
            const auto solver = factor_psi(psi, t, l);
            const CMat &R = setup.R(k, l);
            // R Psi^{-1} = (Psi^{-1} R)^H since both are Hermitian.
            const CMat psi_inv_R = solver.solve(R);
            bank.weight[k].push_back(std::sqrt(tp) * psi_inv_R.adjoint());
            CMat C = R - tp * (R * psi_inv_R);
            make_hermitian(C);
            bank.err_cov[k].push_back(std::move(C));
        }
    }
    return bank;
}

ChannelEstimateSet estimate_channels(const EstimatorBank &bank, const PilotStatistics &pilots,
                                     const DccAssignment &dcc)
{
    ChannelEstimateSet est;
    est.h_hat.resize(bank.K);
    for (int k = 0; k < bank.K; ++k) {
        const auto &M = dcc.serving_sets[k];
        est.h_hat[k].reserve(M.size());
        for (std::size_t j = 0; j < M.size(); ++j)
            est.h_hat[k].push_back(bank.weight[k][j] * pilots.for_ue(dcc, k, M[j]));
    }
    return est;
}

} // namespace cfmimo
