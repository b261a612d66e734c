#pragma once

#include "cfmimo/config.hpp"
#include "cfmimo/linalg.hpp"
#include "cfmimo/network.hpp"
#include "cfmimo/rng.hpp"

#include <stdexcept>
#include <vector>

namespace cfmimo {

class EstimationError : public std::runtime_error {
public:
    EstimationError(const std::string &what, int pilot, int ap)
        : std::runtime_error(what), pilot_(pilot), ap_(ap) {}
    int pilot() const { return pilot_; }
    int ap() const { return ap_; }

private:
    int pilot_;
    int ap_;
};

// Psi matrices whose condition estimate exceeds this are rejected.
inline constexpr double kMaxPsiCondition = 1e12;

// Hermitian square roots of every R_kl, computed once per setup.
struct CorrelationRoots {
    int L = 0;
    int K = 0;
    std::vector<CMat> roots;
    const CMat &root(int k, int l) const { return roots[static_cast<std::size_t>(l) * K + k]; }
};

CorrelationRoots correlation_roots(const NetworkSetup &setup);

struct ChannelRealization {
    int L = 0;
    int K = 0;
    std::vector<CVec> h; // h[l * K + k]
    const CVec &at(int k, int l) const { return h[static_cast<std::size_t>(l) * K + k]; }
    CVec &at(int k, int l) { return h[static_cast<std::size_t>(l) * K + k]; }
};

ChannelRealization sample_channels(const CorrelationRoots &roots, Engine &eng);

// Received pilot statistics, one per (pilot, AP) pair; z_kl is the entry for
// UE k's pilot, so co-pilot UEs share it.
struct PilotStatistics {
    int L = 0;
    int tau_p = 0;
    std::vector<CVec> z; // z[t * L + l]
    const CVec &at_pilot(int t, int l) const { return z[static_cast<std::size_t>(t) * L + l]; }
    const CVec &for_ue(const DccAssignment &dcc, int k, int l) const { return at_pilot(dcc.pilot_of[k], l); }
};

PilotStatistics pilot_sufficient_statistic(const ChannelRealization &real, const DccAssignment &dcc,
                                           const SimConfig &config, Engine &eng);

// tau_p rho_p sum_{i in P_k} R_il + sigma2 I for pilot t at AP l.
CMat pilot_covariance(const NetworkSetup &setup, const DccAssignment &dcc, const SimConfig &config,
                      int pilot, int ap);

CVec mmse_estimate(const CVec &z, const CMat &R, const CMat &psi, double tau_p_rho_p,
                   int pilot = -1, int ap = -1);

CMat error_covariance(const CMat &R, const CMat &psi, const SimConfig &config, int pilot = -1, int ap = -1);

// Per-setup estimator matrices for every served link: estimate = W_kl z_kl.
struct EstimatorBank {
    int L = 0;
    int K = 0;
    // Indexed [k][j] for the j-th AP in M_k.
    std::vector<std::vector<CMat>> weight;
    std::vector<std::vector<CMat>> err_cov;
};

EstimatorBank build_estimators(const NetworkSetup &setup, const DccAssignment &dcc, const SimConfig &config);

// Estimates for l in M_k only, indexed [k][j] like the bank.
struct ChannelEstimateSet {
    std::vector<std::vector<CVec>> h_hat;
};

ChannelEstimateSet estimate_channels(const EstimatorBank &bank, const PilotStatistics &pilots,
                                     const DccAssignment &dcc);

} // namespace cfmimo
