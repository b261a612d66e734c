#include "cfmimo/campaign.hpp"

#include "cfmimo/combining.hpp"
#include "cfmimo/digest.hpp"
#include "cfmimo/lsfd.hpp"
#include "cfmimo/network.hpp"
#include "cfmimo/parallel.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

namespace cfmimo {

namespace fs = std::filesystem;

std::string ModeSpec::name() const
{
    return (original ? "original-" : "") + to_string(lsfd);
}

ModeSpec parse_mode(const std::string &s)
{
    const std::string prefix = "original-";
    if (s.rfind(prefix, 0) == 0)
        return {parse_lsfd_mode(s.substr(prefix.size())), true};
    return {parse_lsfd_mode(s), false};
}

namespace {

std::vector<std::string> split_csv(const std::string &csv)
{
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(item);
    return out;
}

std::string fmt(double x)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

} // namespace

std::vector<ModeSpec> parse_mode_list(const std::string &csv)
{
    std::vector<ModeSpec> modes;
    for (const auto &s : split_csv(csv))
        modes.push_back(parse_mode(s));
    if (modes.empty())
        throw ConfigError("empty mode list");
    return modes;
}

std::vector<PowerMode> parse_power_list(const std::string &csv)
{
    std::vector<PowerMode> p;
    for (const auto &s : split_csv(csv))
        p.push_back(parse_power_mode(s));
    if (p.empty())
        throw ConfigError("empty power list");
    return p;
}

std::string cdf_label(const std::string &mode, PowerMode power, bool per_setup_min)
{
    return mode + ":" + to_string(power) + (per_setup_min ? ":min-per-setup" : "");
}

std::vector<double> CampaignResult::se_samples(const std::string &mode, PowerMode power) const
{
    std::vector<double> out;
    for (const auto &r : records)
        if (r.mode == mode && r.power == power)
            out.push_back(r.se);
    return out;
}

std::vector<double> CampaignResult::min_se_per_setup(const std::string &mode, PowerMode power) const
{
    std::map<int, double> mins;
    for (const auto &r : records) {
        if (r.mode != mode || r.power != power)
            continue;
        auto [it, inserted] = mins.emplace(r.setup, r.se);
        if (!inserted)
            it->second = std::min(it->second, r.se);
    }
    std::vector<double> out;
    for (const auto &[s, v] : mins)
        out.push_back(v);
    return out;
}

namespace {

struct SetupOutput {
    bool ok = false;
    std::string error;
    std::vector<SeRecord> records;
    std::vector<TraceRecord> traces;
    std::vector<ConvergenceRecord> convergence;
    // (mode, metric) -> (per_ue, total)
    std::vector<AccountingRow> accounting;
};

LsfdStatistics cached_statistics(const NetworkSetup &setup, const DccAssignment &dcc, const SimConfig &config,
                                 const std::vector<double> &eta, const std::string &cache_dir,
                                 const std::string &tag)
{
    if (cache_dir.empty())
        return estimate_lsfd_statistics(setup, dcc, config, eta);
    const fs::path file = fs::path(cache_dir) / (statistics_cache_key(config, setup.setup_index, tag) + ".json");
    if (fs::exists(file)) {
        std::ifstream in(file);
        return statistics_from_json(nlohmann::json::parse(in));
    }
    auto stats = estimate_lsfd_statistics(setup, dcc, config, eta);
    fs::create_directories(cache_dir);
    const fs::path tmp = file.string() + ".tmp" + std::to_string(setup.setup_index);
    {
        std::ofstream out(tmp);
        out << statistics_to_json(stats).dump();
    }
    fs::rename(tmp, file);
    return stats;
}

std::vector<double> true_sinr(const LsfdStatistics &stats, const DccAssignment &dcc, LsfdMode mode,
                              const std::vector<std::vector<int>> &sets, const std::vector<double> &eta)
{
    std::vector<double> s(stats.K);
    for (int k = 0; k < stats.K; ++k) {
        switch (mode) {
        case LsfdMode::Level2:
            s[k] = sinr(stats, eta, k, level2_weights(k, dcc));
            break;
        case LsfdMode::Level3Opt:
            s[k] = optimal_sinr(stats, eta, k);
            break;
        case LsfdMode::Level3NOpt:
            s[k] = sinr(stats, eta, k, nearly_optimal_lsfd(stats, eta, k, sets[k]).a);
            break;
        }
    }
    return s;
}

SetupOutput run_setup(const SimConfig &config, const CampaignOptions &options, int setup_index)
{
    SetupOutput out;
    const auto setup = generate_setup(config, setup_index);
    const auto dcc = assign_pilots_and_clusters(setup, config);
    const std::vector<double> full(config.K, config.rho_u);

    std::optional<DccAssignment> original_dcc;
    std::optional<LsfdStatistics> stats, original_stats;
    for (const auto &mode : options.modes) {
        const DccAssignment *d = &dcc;
        const LsfdStatistics *st = nullptr;
        if (mode.original) {
            if (!original_dcc) {
                original_dcc = all_serving(dcc);
                original_stats = cached_statistics(setup, *original_dcc, config, full, options.cache_dir, "original");
            }
            d = &*original_dcc;
            st = &*original_stats;
        } else {
            if (!stats)
                stats = cached_statistics(setup, dcc, config, full, options.cache_dir, "proposed");
            st = &*stats;
        }
        const auto sets = mode.lsfd == LsfdMode::Level3NOpt
                              ? interference_sets(*d, config.R_design, config.N)
                              : std::vector<std::vector<int>>{};
        const std::string name = mode.name();

        for (PowerMode power : options.powers) {
            std::vector<double> eta = full;
            if (power == PowerMode::MaxMin) {
                PowerControlProblem prob;
                prob.stats = st;
                prob.mode = mode.lsfd;
                prob.sets = &sets;
                prob.dcc = d;
                prob.rho_u = config.rho_u;
                const auto alloc = maxmin_fixed_point(prob, {config.fp_tol, config.max_iters, std::nullopt});
                eta = alloc.eta;
                out.convergence.push_back({setup_index, name, alloc.iterations, alloc.converged});
                if (options.trace_convergence)
                    for (const auto &row : alloc.history)
                        out.traces.push_back({setup_index, name, row});
            }
            const auto s = true_sinr(*st, *d, mode.lsfd, sets, eta);
            for (int k = 0; k < config.K; ++k)
                out.records.push_back({setup_index, k, name, power, s[k], se(s[k], config.tau_c, config.tau_p)});
        }

        const auto rep = fronthaul_report(*d, config, mode.lsfd, sets.empty() ? nullptr : &sets);
        out.accounting.push_back({name, "lsfd_mults", rep.lsfd_mults_avg, rep.lsfd_mults_total});
        out.accounting.push_back({name, "uplink_scalars", rep.uplink.per_ue, rep.uplink.total});
        out.accounting.push_back({name, "stats_scalars", rep.stats.per_ue, rep.stats.total});
    }
    out.ok = true;
    return out;
}

} // namespace

CampaignResult run_campaign(const SimConfig &config, const CampaignOptions &options)
{
    config.validate();
    if (options.modes.empty() || options.powers.empty())
        throw CampaignError("campaign: at least one mode and one power rule required");

    std::vector<SetupOutput> outputs(config.n_setups);
    parallel_for(static_cast<std::size_t>(config.n_setups), options.threads, [&](std::size_t s) {
        try {
            outputs[s] = run_setup(config, options, static_cast<int>(s));
        } catch (const std::exception &e) {
            outputs[s].ok = false;
            outputs[s].error = e.what();
        }
    });

    CampaignResult r;
    r.setups_run = config.n_setups;
    std::map<std::pair<std::string, std::string>, std::pair<Rational, Rational>> acc;
    std::vector<std::pair<std::string, std::string>> acc_order;
    int ok = 0;
    for (int s = 0; s < config.n_setups; ++s) {
        auto &o = outputs[s];
        if (!o.ok) {
            r.failed_setups.push_back(s);
            r.failure_messages.push_back("setup " + std::to_string(s) + ": " + o.error);
            continue;
        }
        ++ok;
        r.records.insert(r.records.end(), o.records.begin(), o.records.end());
        r.traces.insert(r.traces.end(), o.traces.begin(), o.traces.end());
        r.convergence.insert(r.convergence.end(), o.convergence.begin(), o.convergence.end());
        for (const auto &row : o.accounting) {
            const auto key = std::make_pair(row.mode, row.metric);
            auto [it, inserted] = acc.try_emplace(key, Rational(0), Rational(0));
            if (inserted)
                acc_order.push_back(key);
            it->second.first += row.per_ue;
            it->second.second += row.total;
        }
    }
    const double failed_fraction = static_cast<double>(r.failed_setups.size()) / config.n_setups;
    if (failed_fraction > options.max_failure_fraction) {
        std::string msg = "campaign: " + std::to_string(r.failed_setups.size()) + " of " +
                          std::to_string(config.n_setups) + " setups failed";
        if (!r.failure_messages.empty())
            msg += " (first: " + r.failure_messages.front() + ")";
        throw CampaignError(msg);
    }
    for (const auto &key : acc_order) {
        const auto &[per_ue, total] = acc.at(key);
        r.accounting.push_back({key.first, key.second, per_ue / Rational(ok), total / Rational(ok)});
    }
    for (const auto &mode : options.modes) {
        for (PowerMode p : options.powers) {
            const auto name = mode.name();
            r.cdfs[cdf_label(name, p, false)] = empirical_cdf(r.se_samples(name, p));
            r.cdfs[cdf_label(name, p, true)] = empirical_cdf(r.min_se_per_setup(name, p));
        }
    }
    return r;
}

std::string per_ue_csv(const CampaignResult &r)
{
    std::string s = "setup,ue,mode,power_mode,sinr,se_bits_per_hz\n";
    for (const auto &x : r.records)
        s += std::to_string(x.setup) + ',' + std::to_string(x.ue) + ',' + x.mode + ',' + to_string(x.power) +
             ',' + fmt(x.sinr) + ',' + fmt(x.se) + '\n';
    return s;
}

std::string cdf_csv(const CampaignResult &r)
{
    std::string s = "mode,value,prob\n";
    for (const auto &[label, pts] : r.cdfs)
        for (const auto &[v, p] : pts)
            s += label + ',' + fmt(v) + ',' + fmt(p) + '\n';
    return s;
}

std::string accounting_csv(const CampaignResult &r)
{
    std::string s = "mode,metric,per_ue,total\n";
    for (const auto &a : r.accounting)
        s += a.mode + ',' + a.metric + ',' + a.per_ue.to_string() + ',' + a.total.to_string() + '\n';
    return s;
}

std::string trace_csv(const CampaignResult &r)
{
    std::string s = "setup,mode,iteration,min_sinr,max_sinr,spread\n";
    for (const auto &t : r.traces)
        s += std::to_string(t.setup) + ',' + t.mode + ',' + std::to_string(t.row.iteration) + ',' +
             fmt(t.row.min_sinr) + ',' + fmt(t.row.max_sinr) + ',' + fmt(t.row.spread) + '\n';
    return s;
}

void write_campaign(const CampaignResult &r, const SimConfig &config, const CampaignOptions &options,
                    const std::string &dir)
{
    fs::create_directories(dir);
    std::vector<std::pair<std::string, std::string>> files{
        {"per_ue.csv", per_ue_csv(r)},
        {"cdf.csv", cdf_csv(r)},
        {"accounting.csv", accounting_csv(r)},
    };
    if (options.trace_convergence)
        files.emplace_back("convergence.csv", trace_csv(r));

    nlohmann::ordered_json manifest;
    manifest["version"] = kVersion;
    manifest["config"] = config.to_text();
    {
        nlohmann::ordered_json modes = nlohmann::ordered_json::array();
        for (const auto &m : options.modes)
            modes.push_back(m.name());
        manifest["modes"] = modes;
        nlohmann::ordered_json powers = nlohmann::ordered_json::array();
        for (auto p : options.powers)
            powers.push_back(to_string(p));
        manifest["power"] = powers;
    }
    manifest["threads"] = options.threads;
    manifest["setups_run"] = r.setups_run;
    manifest["failed_setups"] = r.failed_setups;
    manifest["failure_messages"] = r.failure_messages;
    manifest["config_digest"] = hex_digest(fnv1a(config.to_text()));
    for (const auto &[name, content] : files) {
        std::ofstream(fs::path(dir) / name, std::ios::binary) << content;
        manifest["digests"][name] = hex_digest(fnv1a(content));
    }
    std::ofstream(fs::path(dir) / "manifest.json") << manifest.dump(2) << '\n';
}

} // namespace cfmimo
