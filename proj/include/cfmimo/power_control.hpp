#pragma once

#include "cfmimo/combining.hpp"
#include "cfmimo/config.hpp"
#include "cfmimo/network.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cfmimo {

struct IterationRecord {
    int iteration = 0;
    double min_sinr = 0;
    double max_sinr = 0;
    double spread = 0; // (max - min) / max
};

struct PowerAllocation {
    std::vector<double> eta;
    std::vector<double> sinr; // monitored SINRs at `eta`
    int iterations = 0;
    bool converged = false;
    std::vector<IterationRecord> history;

    double min_sinr() const;
};

// Which SINR the power update balances:
//  Level3Opt  - optimal-LSFD SINR,
//  Level3NOpt - the same quotient with interference restricted to S_k^R,
//  Level2     - SINR of uniform LSFD weights.
struct PowerControlProblem {
    const LsfdStatistics *stats = nullptr;
    LsfdMode mode = LsfdMode::Level3Opt;
    const std::vector<std::vector<int>> *sets = nullptr; // Level3NOpt only
    const DccAssignment *dcc = nullptr;                  // Level2 only
    double rho_u = 0.1;
};

// SINR_k / eta_k for every UE at powers `eta`.
std::vector<double> sinr_per_unit_power(const PowerControlProblem &p, std::span<const double> eta);

std::vector<double> monitored_sinr(const PowerControlProblem &p, std::span<const double> eta);

// One update: eta_k <- 1 / (E{g_kk}^H C_k^{-1} E{g_kk}), then rescale so that
// the largest power equals rho_u.
std::vector<double> fixed_point_step(const PowerControlProblem &p, std::span<const double> eta_prev);

struct FixedPointOptions {
    double tol = 1e-3;
    int max_iters = 500;
    std::optional<std::vector<double>> initial; // defaults to rho_u for all UEs
};

PowerAllocation maxmin_fixed_point(const PowerControlProblem &p, const FixedPointOptions &opts);

// Exhaustive search of min_k SINR_k over {rho_u t / grid_n : t = 1..grid_n}^K.
PowerAllocation grid_search_oracle(const PowerControlProblem &p, int grid_n);

inline constexpr int kGridOracleMaxUes = 4;

std::string trace_csv(const PowerAllocation &alloc);

} // namespace cfmimo
