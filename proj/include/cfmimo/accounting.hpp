#pragma once

#include "cfmimo/config.hpp"
#include "cfmimo/network.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace cfmimo {

// Exact non-negative rational with 64-bit terms, always in lowest terms.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    // Integer or shortest round-trip decimal.
    std::string to_string() const;

    Rational &operator+=(const Rational &o);
    friend Rational operator+(Rational a, const Rational &b) { return a += b; }
    friend Rational operator*(const Rational &a, const Rational &b);
    friend Rational operator/(const Rational &a, const Rational &b);
    friend bool operator==(const Rational &a, const Rational &b) = default;
    friend bool operator<(const Rational &a, const Rational &b);
    friend bool operator<=(const Rational &a, const Rational &b) { return !(b < a); }

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

// Complex multiplications of a Cholesky-based solve of size m:
// m^2 + (m^3 - m) / 3.
std::int64_t lsfd_complexity(std::int64_t m);

struct Count {
    Rational total;
    Rational per_ue;
};

// Data-phase scalars per coherence block, (tau_c - tau_p) sum_l |D_l|.
Count fronthaul_uplink_count(const DccAssignment &dcc, int tau_c, int tau_p);

// Statistical parameters per setup. Level2 sends none; Level3Opt sends
// (3K + 1)/2 per served link; Level3NOpt sends (3|S_k| + 1)/2.
Count fronthaul_stats_count(const DccAssignment &dcc, int K, LsfdMode mode,
                            const std::vector<std::vector<int>> *sets = nullptr);

struct FronthaulReport {
    std::vector<std::int64_t> lsfd_mults_per_ue;
    Rational lsfd_mults_avg;
    Rational lsfd_mults_total;
    Count uplink;
    Count stats;
};

FronthaulReport fronthaul_report(const DccAssignment &dcc, const SimConfig &config, LsfdMode mode,
                                 const std::vector<std::vector<int>> *sets = nullptr);

// Sorted (value, i/n) pairs.
std::vector<std::pair<double, double>> empirical_cdf(std::vector<double> samples);

} // namespace cfmimo
