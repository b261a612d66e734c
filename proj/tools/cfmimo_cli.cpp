// Uplink cell-free massive MIMO campaign runner.
//
//   cfmimo --config scenario.cfg --setups 50 --mode level2,level3-opt,level3-nopt \
//          --power full,maxmin --out results/

#include "cfmimo/accounting.hpp"
#include "cfmimo/campaign.hpp"
#include "cfmimo/config.hpp"
#include "cfmimo/network.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

int main(int argc, char **argv)
{
    CLI::App app{"Monte-Carlo simulator for user-centric cell-free massive MIMO uplink"};

    std::string config_path, out_dir = "cfmimo_out", modes, power, cache_dir;
    std::uint64_t seed = 0;
    int setups = 0, trials = 0, R = 0;
    int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    bool trace = false, export_positions = false;
    std::vector<std::string> overrides;

    app.add_option("--config", config_path, "Key-value config file")->check(CLI::ExistingFile);
    auto *seed_opt = app.add_option("--seed", seed, "RNG seed");
    app.add_option("--setups", setups, "Number of random setups")->check(CLI::PositiveNumber);
    app.add_option("--trials", trials, "Fading realizations per setup")->check(CLI::PositiveNumber);
    app.add_option("--mode", modes, "Comma list of level2, level3-opt, level3-nopt (optionally original-*)");
    app.add_option("--power", power, "full, maxmin, or full,maxmin");
    app.add_option("--R", R, "Interference-set design parameter")->check(CLI::PositiveNumber);
    app.add_option("--out", out_dir, "Output directory");
    app.add_flag("--trace-convergence", trace, "Write per-iteration power-control trace");
    app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--cache", cache_dir, "Directory for cached LSFD statistics");
    app.add_option("--set", overrides, "Override a config key, e.g. --set K=20");
    app.add_flag("--export-positions", export_positions, "Write positions_<setup>.csv per setup");

    CLI11_PARSE(app, argc, argv);

    try {
        cfmimo::SimConfig cfg = config_path.empty() ? cfmimo::SimConfig{} : cfmimo::load_config(config_path);
        for (const auto &kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw cfmimo::ConfigError("--set expects key=value, got '" + kv + "'");
            cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (*seed_opt)
            cfg.seed = seed;
        if (setups)
            cfg.n_setups = setups;
        if (trials)
            cfg.mc_trials = trials;
        if (R)
            cfg.R_design = R;
        cfg.validate();

        cfmimo::CampaignOptions opts;
        opts.modes = modes.empty() ? std::vector<cfmimo::ModeSpec>{{cfg.lsfd_mode, false}}
                                   : cfmimo::parse_mode_list(modes);
        opts.powers = power.empty() ? std::vector<cfmimo::PowerMode>{cfg.power_mode}
                                    : cfmimo::parse_power_list(power);
        opts.threads = threads;
        opts.trace_convergence = trace;
        opts.cache_dir = cache_dir;

        const auto result = cfmimo::run_campaign(cfg, opts);
        cfmimo::write_campaign(result, cfg, opts, out_dir);
        if (export_positions) {
            for (int s = 0; s < cfg.n_setups; ++s) {
                const auto path = std::filesystem::path(out_dir) / ("positions_" + std::to_string(s) + ".csv");
                std::ofstream(path) << cfmimo::positions_csv(cfmimo::generate_setup(cfg, s));
            }
        }

        std::cout << "setups: " << result.setups_run << " (failed " << result.failed_setups.size() << ")\n";
        for (const auto &a : result.accounting)
            std::cout << a.mode << ' ' << a.metric << " per UE " << a.per_ue.to_string() << '\n';
        std::cout << "outputs written to " << out_dir << '\n';
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
