#pragma once

#include "cfmimo/accounting.hpp"
#include "cfmimo/config.hpp"
#include "cfmimo/power_control.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfmimo {

class CampaignError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An evaluated scheme. `original` selects the all-serving DCC.
struct ModeSpec {
    LsfdMode lsfd = LsfdMode::Level3Opt;
    bool original = false;

    std::string name() const;
    friend bool operator==(const ModeSpec &, const ModeSpec &) = default;
};

// Accepts level2, level3-opt, level3-nopt, each optionally prefixed `original-`.
ModeSpec parse_mode(const std::string &s);
std::vector<ModeSpec> parse_mode_list(const std::string &csv);
std::vector<PowerMode> parse_power_list(const std::string &csv);

struct CampaignOptions {
    std::vector<ModeSpec> modes{{LsfdMode::Level2, false}, {LsfdMode::Level3Opt, false}};
    std::vector<PowerMode> powers{PowerMode::Full};
    int threads = 1;
    bool trace_convergence = false;
    std::string cache_dir; // LsfdStatistics JSON cache; empty disables
    double max_failure_fraction = 0.01;
};

struct SeRecord {
    int setup = 0;
    int ue = 0;
    std::string mode;
    PowerMode power = PowerMode::Full;
    double sinr = 0;
    double se = 0;
};

struct TraceRecord {
    int setup = 0;
    std::string mode;
    IterationRecord row;
};

struct ConvergenceRecord {
    int setup = 0;
    std::string mode;
    int iterations = 0;
    bool converged = false;
};

struct AccountingRow {
    std::string mode;
    std::string metric;
    Rational per_ue;
    Rational total;
};

struct CampaignResult {
    std::vector<SeRecord> records; // ordered by setup, mode, power, UE
    std::map<std::string, std::vector<std::pair<double, double>>> cdfs;
    std::vector<AccountingRow> accounting; // averages over successful setups
    std::vector<TraceRecord> traces;
    std::vector<ConvergenceRecord> convergence;
    std::vector<int> failed_setups;
    std::vector<std::string> failure_messages;
    int setups_run = 0;

    // SE of every (setup, UE) for one mode and power rule, in record order.
    std::vector<double> se_samples(const std::string &mode, PowerMode power) const;
    // Minimum SE per successful setup.
    std::vector<double> min_se_per_setup(const std::string &mode, PowerMode power) const;
};

std::string cdf_label(const std::string &mode, PowerMode power, bool per_setup_min);

CampaignResult run_campaign(const SimConfig &config, const CampaignOptions &options);

std::string per_ue_csv(const CampaignResult &r);
std::string cdf_csv(const CampaignResult &r);
std::string accounting_csv(const CampaignResult &r);
std::string trace_csv(const CampaignResult &r);

// Writes per_ue.csv, cdf.csv, accounting.csv, optionally convergence.csv,
// and manifest.json into `dir`.
void write_campaign(const CampaignResult &r, const SimConfig &config, const CampaignOptions &options,
                    const std::string &dir);

inline constexpr const char *kVersion = "0.1.0";

} // namespace cfmimo
