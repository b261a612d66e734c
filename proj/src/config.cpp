#include "cfmimo/config.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace cfmimo {

namespace {

std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

int to_int(const std::string &key, const std::string &v)
{
    std::size_t pos = 0;
    long long x = 0;
    try {
        x = std::stoll(v, &pos);
    } catch (const std::exception &) {
        throw ConfigError("config: '" + key + "' expects an integer, got '" + v + "'");
    }
    if (pos != v.size() || x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
        throw ConfigError("config: '" + key + "' expects an integer, got '" + v + "'");
    return static_cast<int>(x);
}

double to_double(const std::string &key, const std::string &v)
{
    std::size_t pos = 0;
    double x = 0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception &) {
        throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
    }
    if (pos != v.size())
        throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
    return x;
}

} // namespace

std::string to_string(CombinerKind c)
{
    return c == CombinerKind::MR ? "MR" : "partial-MMSE";
}

std::string to_string(LsfdMode m)
{
    switch (m) {
    case LsfdMode::Level2: return "level2";
    case LsfdMode::Level3Opt: return "level3-opt";
    case LsfdMode::Level3NOpt: return "level3-nopt";
    }
    return "?";
}

std::string to_string(PowerMode p)
{
    return p == PowerMode::Full ? "full" : "maxmin";
}

CombinerKind parse_combiner(const std::string &s)
{
    if (s == "MR" || s == "mr")
        return CombinerKind::MR;
    if (s == "partial-MMSE" || s == "partial-mmse" || s == "pmmse")
        return CombinerKind::PartialMMSE;
    throw ConfigError("unknown combiner '" + s + "'");
}

LsfdMode parse_lsfd_mode(const std::string &s)
{
    if (s == "level2")
        return LsfdMode::Level2;
    if (s == "level3-opt")
        return LsfdMode::Level3Opt;
    if (s == "level3-nopt")
        return LsfdMode::Level3NOpt;
    throw ConfigError("unknown LSFD mode '" + s + "'");
}

PowerMode parse_power_mode(const std::string &s)
{
    if (s == "full")
        return PowerMode::Full;
    if (s == "maxmin")
        return PowerMode::MaxMin;
    throw ConfigError("unknown power mode '" + s + "'");
}

void SimConfig::validate() const
{
    if (L < 1 || N < 1 || K < 1 || mc_trials < 1 || n_setups < 1 || tau_c < 1 || tau_p < 1)
        throw ConfigError("config: all counts must be >= 1");
    if (!(tau_p < tau_c))
        throw ConfigError("config: require 0 < tau_p < tau_c");
    if (!(rho_p > 0) || !(rho_u > 0) || !(sigma2 > 0))
        throw ConfigError("config: rho_p, rho_u and sigma2 must be positive");
    if (R_design < 1)
        throw ConfigError("config: R_design must be >= 1");
    if (!(area_side > 0) || !(min_distance > 0) || ap_height < 0 || asd_deg < 0 || shadow_std_db < 0)
        throw ConfigError("config: geometry parameters out of range");
    if (!(fp_tol > 0) || max_iters < 1)
        throw ConfigError("config: fp_tol must be positive and max_iters >= 1");
}

void SimConfig::set(const std::string &key, const std::string &raw)
{
    const std::string v = trim(raw);
    if (key == "L") L = to_int(key, v);
    else if (key == "N") N = to_int(key, v);
    else if (key == "K") K = to_int(key, v);
    else if (key == "area_side") area_side = to_double(key, v);
    else if (key == "tau_c") tau_c = to_int(key, v);
    else if (key == "tau_p") tau_p = to_int(key, v);
    else if (key == "rho_p") rho_p = to_double(key, v);
    else if (key == "rho_u") rho_u = to_double(key, v);
    else if (key == "sigma2") sigma2 = to_double(key, v);
    else if (key == "asd_deg") asd_deg = to_double(key, v);
    else if (key == "pathloss_alpha") pathloss_alpha = to_double(key, v);
    else if (key == "pathloss_beta") pathloss_beta = to_double(key, v);
    else if (key == "shadow_std_db") shadow_std_db = to_double(key, v);
    else if (key == "ap_height") ap_height = to_double(key, v);
    else if (key == "min_distance") min_distance = to_double(key, v);
    else if (key == "mc_trials") mc_trials = to_int(key, v);
    else if (key == "n_setups") n_setups = to_int(key, v);
    else if (key == "seed") {
        try {
            std::size_t pos = 0;
            seed = std::stoull(v, &pos);
            if (pos != v.size())
                throw ConfigError("");
        } catch (const std::exception &) {
            throw ConfigError("config: 'seed' expects an unsigned integer, got '" + v + "'");
        }
    }
    else if (key == "R_design") R_design = to_int(key, v);
    else if (key == "combiner_kind") combiner_kind = parse_combiner(v);
    else if (key == "lsfd_mode") lsfd_mode = parse_lsfd_mode(v);
    else if (key == "power_mode") power_mode = parse_power_mode(v);
    else if (key == "fp_tol") fp_tol = to_double(key, v);
    else if (key == "max_iters") max_iters = to_int(key, v);
    else
        throw ConfigError("config: unknown key '" + key + "'");
}

std::string SimConfig::to_text() const
{
    std::ostringstream os;
    os << std::setprecision(17);
    os << "L = " << L << '\n'
       << "N = " << N << '\n'
       << "K = " << K << '\n'
       << "area_side = " << area_side << '\n'
       << "tau_c = " << tau_c << '\n'
       << "tau_p = " << tau_p << '\n'
       << "rho_p = " << rho_p << '\n'
       << "rho_u = " << rho_u << '\n'
       << "sigma2 = " << sigma2 << '\n'
       << "asd_deg = " << asd_deg << '\n'
       << "pathloss_alpha = " << pathloss_alpha << '\n'
       << "pathloss_beta = " << pathloss_beta << '\n'
       << "shadow_std_db = " << shadow_std_db << '\n'
       << "ap_height = " << ap_height << '\n'
       << "min_distance = " << min_distance << '\n'
       << "mc_trials = " << mc_trials << '\n'
       << "n_setups = " << n_setups << '\n'
       << "seed = " << seed << '\n'
       << "R_design = " << R_design << '\n'
       << "combiner_kind = " << to_string(combiner_kind) << '\n'
       << "lsfd_mode = " << to_string(lsfd_mode) << '\n'
       << "power_mode = " << to_string(power_mode) << '\n'
       << "fp_tol = " << fp_tol << '\n'
       << "max_iters = " << max_iters << '\n';
    return os.str();
}

SimConfig parse_config(const std::string &text)
{
    SimConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        cfg.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
}

SimConfig load_config(const std::string &path)
{
    std::ifstream f(path);
    if (!f)
        throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

} // namespace cfmimo
