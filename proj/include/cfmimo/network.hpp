#pragma once

#include "cfmimo/config.hpp"
#include "cfmimo/linalg.hpp"

#include <array>
#include <string>
#include <vector>

namespace cfmimo {

using Point = std::array<double, 2>;

struct NetworkSetup {
    int setup_index = 0;
    int L = 0;
    int N = 0;
    int K = 0;
    std::vector<Point> ap_positions;
    std::vector<Point> ue_positions;
    // corr[l * K + k] is R_kl, the N x N covariance of the channel from UE k to AP l.
    std::vector<CMat> corr;
    // gain[l * K + k] = trace(R_kl) / N.
    std::vector<double> gain;

    const CMat &R(int k, int l) const { return corr[static_cast<std::size_t>(l) * K + k]; }
    double beta(int k, int l) const { return gain[static_cast<std::size_t>(l) * K + k]; }
};

// Serving structure. Index sets are sorted ascending.
struct DccAssignment {
    int L = 0;
    int K = 0;
    int tau_p = 0;
    std::vector<int> pilot_of;                // 0-based pilot index per UE
    std::vector<int> master_of;               // master AP per UE, -1 if not appointed
    std::vector<std::vector<int>> copilot_sets; // P_k
    std::vector<std::vector<int>> serving_sets; // M_k
    std::vector<std::vector<int>> served_sets;  // D_l

    bool serves(int l, int k) const;
    // Position of AP l inside M_k, or -1.
    int serving_index(int k, int l) const;

    // Throws std::logic_error naming the first violated invariant.
    // `check_pilot_capacity` enables |D_l| <= tau_p.
    void check_invariants(bool check_pilot_capacity = true) const;
};

// Horizontal distance on the torus of side `side` and the bearing from `ap`
// to the nearest image of `ue`, in radians.
struct WrappedOffset {
    double distance;
    double bearing;
};
WrappedOffset wrapped_offset(const Point &ap, const Point &ue, double side);

// Large-scale fading coefficient (linear) for a horizontal distance and a
// shadowing sample in dB.
double large_scale_gain(double horizontal_distance, double shadow_db, const SimConfig &config);

// Gaussian local-scattering correlation of a half-wavelength ULA, unit
// diagonal, nominal angle `angle` (rad) and angular std `asd` (rad).
CMat local_scattering_correlation(int N, double angle, double asd);

CMat spatial_correlation(const Point &ap, const Point &ue, const SimConfig &config, double shadow_db);

NetworkSetup generate_setup(const SimConfig &config, int setup_index);

DccAssignment assign_pilots_and_clusters(const NetworkSetup &setup, const SimConfig &config);

// Builds a DccAssignment from explicit pilots and serving sets.
DccAssignment make_dcc(int L, int tau_p, const std::vector<int> &pilot_of,
                       const std::vector<std::vector<int>> &serving_sets);

// Every AP serves every UE, pilots kept from `base`.
DccAssignment all_serving(const DccAssignment &base);

// `entity,index,x_m,y_m` rows for APs then UEs.
std::string positions_csv(const NetworkSetup &setup);

} // namespace cfmimo
