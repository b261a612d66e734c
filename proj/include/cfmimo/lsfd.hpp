#pragma once

#include "cfmimo/combining.hpp"
#include "cfmimo/linalg.hpp"
#include "cfmimo/network.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace cfmimo {

class DegenerateStatisticsError : public std::runtime_error {
public:
    DegenerateStatisticsError(const std::string &what, int ue) : std::runtime_error(what), ue_(ue) {}
    int ue() const { return ue_; }

private:
    int ue_;
};

class InvalidWeightsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// UEs sharing at least min(R, |M_k|) serving APs with UE k. Sorted, contains k.
std::vector<int> interference_set(const DccAssignment &dcc, int k, int R, int N);
std::vector<std::vector<int>> interference_sets(const DccAssignment &dcc, int R, int N);

// sum_{i in S} eta_i E{g_ki g_ki^H} - eta_k E{g_kk} E{g_kk}^H + F_k, with S all
// UEs when `subset` is empty. `subset` must contain k.
CMat interference_matrix(const UeStatistics &u, std::span<const double> eta,
                         std::optional<std::span<const int>> subset = std::nullopt);

struct LsfdVector {
    CVec a;
    std::int64_t multiplications = 0;
};

LsfdVector optimal_lsfd(const LsfdStatistics &stats, std::span<const double> eta, int k);
LsfdVector nearly_optimal_lsfd(const LsfdStatistics &stats, std::span<const double> eta, int k,
                               std::span<const int> interference_set);

// Effective SINR of UE k for weights `a`.
double sinr(const LsfdStatistics &stats, std::span<const double> eta, int k, const CVec &a);

// eta_k E{g_kk}^H C^{-1} E{g_kk}, with C the (optionally restricted) interference matrix.
double optimal_sinr(const LsfdStatistics &stats, std::span<const double> eta, int k,
                    std::optional<std::span<const int>> subset = std::nullopt);

double se(double sinr_value, int tau_c, int tau_p);

CVec level2_weights(int k, const DccAssignment &dcc);

} // namespace cfmimo
