#pragma once

#include "cfmimo/channel.hpp"
#include "cfmimo/config.hpp"
#include "cfmimo/linalg.hpp"
#include "cfmimo/network.hpp"

#include <nlohmann/json.hpp>

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfmimo {

class CombinerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<CVec> mr_combiner(std::span<const CVec> estimates);

// v_k = eta_k (sum_i eta_i (h_i h_i^H + C_i) + sigma2 I)^{-1} h_k for every
// UE served by one AP; all inputs are that AP's local quantities.
std::vector<CVec> partial_mmse_combiner(std::span<const CVec> estimates, std::span<const CMat> err_covs,
                                        std::span<const double> eta, double sigma2);

// Long-term statistics of the receive-combined channels g_ki of one UE k,
// over its serving APs M_k (ascending).
struct UeStatistics {
    int ue = 0;
    std::vector<int> serving;
    CMat cross_mean;           // |M_k| x K, column i is E{g_ki}
    Eigen::MatrixXd second;    // |M_k| x K, E{|[g_ki]_l|^2}
    RVec noise;                // diagonal of F_k: sigma2 E{||v_kl||^2}

    int size() const { return static_cast<int>(serving.size()); }
    CVec g_mean() const { return cross_mean.col(ue); }
    // E{g_ki g_ki^H}; off-diagonal entries factor across independent APs.
    CMat g_second(int i) const;
    Eigen::MatrixXd F() const { return noise.asDiagonal(); }
};

struct LsfdStatistics {
    int K = 0;
    int trials_used = 0;
    std::vector<UeStatistics> ue;
};

// Monte-Carlo estimate over trials [first_trial, first_trial + config.mc_trials).
// Combiners are built with the transmit powers `eta`. The result does not
// depend on `threads`.
LsfdStatistics estimate_lsfd_statistics(const NetworkSetup &setup, const DccAssignment &dcc,
                                        const SimConfig &config, std::span<const double> eta,
                                        int threads = 1, int first_trial = 0);

nlohmann::json statistics_to_json(const LsfdStatistics &stats);
LsfdStatistics statistics_from_json(const nlohmann::json &j);

std::string statistics_cache_key(const SimConfig &config, int setup_index, const std::string &tag = {});

} // namespace cfmimo
