#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfmimo {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class CombinerKind { MR, PartialMMSE };
enum class LsfdMode { Level2, Level3Opt, Level3NOpt };
enum class PowerMode { Full, MaxMin };

std::string to_string(CombinerKind c);
std::string to_string(LsfdMode m);
std::string to_string(PowerMode p);
CombinerKind parse_combiner(const std::string &s);
LsfdMode parse_lsfd_mode(const std::string &s);
PowerMode parse_power_mode(const std::string &s);

// Simulation parameters. Powers are in watts, distances in meters.
struct SimConfig {
    int L = 100;
    int N = 4;
    int K = 40;
    double area_side = 1000.0;
    int tau_c = 200;
    int tau_p = 10;
    double rho_p = 0.1;
    double rho_u = 0.1;
    double sigma2 = 3.9810717055349565e-13; // -94 dBm
    double asd_deg = 15.0;
    double pathloss_alpha = -30.5; // dB at 1 m
    double pathloss_beta = 36.7;   // dB per decade
    double shadow_std_db = 4.0;
    double ap_height = 10.0;
    double min_distance = 1.0;
    int mc_trials = 200;
    int n_setups = 1;
    std::uint64_t seed = 1;
    int R_design = 5;
    CombinerKind combiner_kind = CombinerKind::PartialMMSE;
    LsfdMode lsfd_mode = LsfdMode::Level3Opt;
    PowerMode power_mode = PowerMode::Full;
    double fp_tol = 1e-3;
    int max_iters = 500;

    void validate() const;

    // Assigns one `key = value` pair by SimConfig field name.
    void set(const std::string &key, const std::string &value);

    // Canonical `key = value` listing; parse_config(to_text()) reproduces *this.
    std::string to_text() const;
};

SimConfig parse_config(const std::string &text);
SimConfig load_config(const std::string &path);

} // namespace cfmimo
