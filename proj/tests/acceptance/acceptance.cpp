// Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails. Tolerances are fixed below.

#include "cfmimo/accounting.hpp"
#include "cfmimo/campaign.hpp"
#include "cfmimo/channel.hpp"
#include "cfmimo/lsfd.hpp"
#include "cfmimo/network.hpp"
#include "cfmimo/power_control.hpp"
#include "../oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>

using namespace cfmimo;

namespace {

constexpr double kOptimalityTol = 1e-9;
constexpr double kClosedFormTol = 1e-10;
constexpr double kGridTol = 0.005;
constexpr double kSpreadTol = 1e-3;
constexpr double kStartTol = 1e-6;
constexpr double kTightFpTol = 1e-12;
constexpr int kMaxDeskIterations = 30;
constexpr double kStdErrors = 3.0;
constexpr double kMedianGain = 0.20;
constexpr double kNoptShare = 0.95;
constexpr double kFullSetTol = 1e-12;
constexpr double kMaxMinShare = 0.95;

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void report(const char *id, const char *name, const std::function<Outcome()> &fn)
{
    Outcome o;
    try {
        o = fn();
    } catch (const std::exception &e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass)
        ++failures;
    std::printf("%s %s %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

SimConfig desk_config()
{
    SimConfig c;
    c.L = 25;
    c.K = 10;
    c.tau_p = 5;
    c.n_setups = 50;
    c.mc_trials = 200;
    c.seed = 2024;
    c.combiner_kind = CombinerKind::PartialMMSE;
    c.R_design = 5;
    return c;
}

Outcome table_counts()
{
    std::vector<int> pilots(40);
    std::vector<std::vector<int>> M(40);
    for (int k = 0; k < 40; ++k) {
        pilots[k] = k % 10;
        for (int l = 0; l < 100; ++l)
            M[k].push_back(l);
    }
    const auto d = make_dcc(100, 10, pilots, M);
    const auto mults = lsfd_complexity(100);
    const auto up = fronthaul_uplink_count(d, 200, 10).per_ue;
    const auto st = fronthaul_stats_count(d, 40, LsfdMode::Level3Opt).per_ue;
    return {mults == 343300 && up == Rational(19000) && st == Rational(6050),
            "mults=" + std::to_string(mults) + " uplink=" + up.to_string() + " stats=" + st.to_string()};
}

Outcome lsfd_optimality()
{
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<int> kdist(1, 6), mdist(1, 8);
    std::uniform_real_distribution<double> edist(0.05, 1.0);
    double worst_excess = 0, worst_closed = 0;
    const int instances = 1000;
    for (int n = 0; n < instances; ++n) {
        const int K = kdist(rng);
        std::vector<int> sizes(K);
        for (auto &m : sizes)
            m = mdist(rng);
        const auto s = oracle::random_statistics(rng, sizes);
        std::vector<double> eta(K);
        for (auto &e : eta)
            e = edist(rng);
        for (int k = 0; k < K; ++k) {
            const auto opt = optimal_lsfd(s, eta, k);
            const double via_weights = sinr(s, eta, k, opt.a);
            const double closed = optimal_sinr(s, eta, k);
            const double literal = oracle::literal_sinr(s.ue[k], eta, opt.a);
            worst_closed = std::max({worst_closed, oracle::rel_diff(via_weights, closed),
                                     oracle::rel_diff(literal, closed)});
            const int m = sizes[k];
            std::vector<CVec> rivals;
            rivals.push_back(CVec::Ones(m) / std::sqrt(static_cast<double>(m)));
            for (int r = 0; r < 100; ++r) {
                CVec a = oracle::random_cvec(rng, m);
                rivals.push_back(a / a.norm());
            }
            for (const auto &a : rivals)
                worst_excess = std::max(worst_excess, oracle::literal_sinr(s.ue[k], eta, a) / closed - 1.0);
        }
    }
    return {worst_excess <= kOptimalityTol && worst_closed <= kClosedFormTol,
            std::to_string(instances) + " instances, max rival excess " + fmt(worst_excess) +
                ", max closed-form gap " + fmt(worst_closed)};
}

Outcome maxmin_oracle()
{
    std::mt19937_64 rng(202);
    std::uniform_int_distribution<int> mdist(1, 4);
    const int instances = 50;
    double worst_grid = 0, worst_excess = 0, worst_fine = 0, worst_spread = 0, worst_start = 0;
    bool all_converged = true;
    oracle::InstanceShape shape;
    for (int n = 0; n < instances; ++n) {
        const auto s = oracle::random_statistics(rng, {mdist(rng), mdist(rng), mdist(rng)}, shape);
        PowerControlProblem p;
        p.stats = &s;
        p.rho_u = 0.1;
        const auto fp = maxmin_fixed_point(p, {});
        all_converged = all_converged && fp.converged;
        worst_spread = std::max(worst_spread, fp.history.back().spread);
        const auto grid = grid_search_oracle(p, 60);
        worst_grid = std::max(worst_grid, (grid.min_sinr() - fp.min_sinr()) / grid.min_sinr());
        worst_excess = std::max(worst_excess, (fp.min_sinr() - grid.min_sinr()) / grid.min_sinr());
        const auto fine = oracle::zoom_grid_maxmin(s, p.rho_u, grid.eta, 2 * p.rho_u / 60);
        const double fine_min = oracle::literal_min_sinr(s, fine);
        worst_fine = std::max(worst_fine, oracle::rel_diff(fp.min_sinr(), fine_min));

        FixedPointOptions tight;
        tight.tol = kTightFpTol;
        const auto ref = maxmin_fixed_point(p, tight);
        std::uniform_real_distribution<double> start(0.001, 0.1);
        for (int r = 0; r < 10; ++r) {
            tight.initial = std::vector<double>{start(rng), start(rng), start(rng)};
            const auto alt = maxmin_fixed_point(p, tight);
            all_converged = all_converged && alt.converged;
            for (int k = 0; k < 3; ++k)
                worst_start = std::max(worst_start, oracle::rel_diff(alt.eta[k], ref.eta[k]));
        }
    }
    return {all_converged && worst_grid <= kGridTol && worst_fine <= kGridTol && worst_spread <= kSpreadTol && worst_start <= kStartTol,
            std::to_string(instances) + " instances, grid shortfall " + fmt(worst_grid) + ", excess over grid " + fmt(worst_excess) +
                ", gap to refined grid " + fmt(worst_fine) + ", spread " +
                fmt(worst_spread) + ", start disagreement " + fmt(worst_start)};
}

Outcome estimator_moments()
{
    SimConfig c;
    c.N = 2;
    c.tau_p = 1;
    c.rho_p = 1.0;
    c.sigma2 = 0.4;
    CMat R0(2, 2), R1(2, 2);
    R0 << 1.0, cd(0.5, 0.2), cd(0.5, -0.2), 0.6;
    R1 << 0.8, cd(-0.1, 0.3), cd(-0.1, -0.3), 0.5;
    NetworkSetup s;
    s.L = 1;
    s.K = 2;
    s.N = 2;
    s.ap_positions = {Point{0, 0}};
    s.ue_positions = {Point{1, 0}, Point{0, 1}};
    s.corr = {R0, R1};
    s.gain = {R0.trace().real() / 2, R1.trace().real() / 2};
    const auto dcc = make_dcc(1, 1, {0, 0}, {{0}, {0}});
    const auto roots = correlation_roots(s);
    const CMat psi = pilot_covariance(s, dcc, c, 0, 0);
    const double tp = c.tau_p * c.rho_p;
    const CMat expect = tp * R0 * psi.inverse() * R0;

    const int trials = 100000;
    CMat sum_hh = CMat::Zero(2, 2), sum_he = CMat::Zero(2, 2);
    Eigen::MatrixXd abs_hh = Eigen::MatrixXd::Zero(2, 2), abs_he = Eigen::MatrixXd::Zero(2, 2);
    for (int t = 0; t < trials; ++t) {
        auto ch = make_engine(55, 0, t, Stream::Channel);
        auto nz = make_engine(55, 0, t, Stream::PilotNoise);
        const auto real = sample_channels(roots, ch);
        const auto z = pilot_sufficient_statistic(real, dcc, c, nz);
        const CVec hhat = mmse_estimate(z.for_ue(dcc, 0, 0), R0, psi, tp);
        const CVec err = real.at(0, 0) - hhat;
        const CMat a = hhat * hhat.adjoint();
        const CMat b = hhat * err.adjoint();
        sum_hh += a;
        sum_he += b;
        abs_hh += a.cwiseAbs2();
        abs_he += b.cwiseAbs2();
    }
    double worst = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const cd m_hh = sum_hh(i, j) / double(trials);
            const cd m_he = sum_he(i, j) / double(trials);
            const double se_hh = std::sqrt((abs_hh(i, j) / trials - std::norm(m_hh)) / trials);
            const double se_he = std::sqrt((abs_he(i, j) / trials - std::norm(m_he)) / trials);
            worst = std::max({worst, std::abs(m_hh - expect(i, j)) / se_hh, std::abs(m_he) / se_he});
        }
    return {worst <= kStdErrors, "largest deviation " + fmt(worst) + " standard errors over 1e5 trials"};
}

struct DeskRuns {
    CampaignResult main;
    CampaignResult threaded;
};

const DeskRuns &desk_runs()
{
    static const DeskRuns runs = [] {
        const auto c = desk_config();
        CampaignOptions o;
        o.modes = parse_mode_list("level2,level3-opt,level3-nopt");
        o.powers = {PowerMode::Full, PowerMode::MaxMin};
        o.trace_convergence = true;
        o.threads = 1;
        DeskRuns r;
        r.main = run_campaign(c, o);
        o.threads = 4;
        r.threaded = run_campaign(c, o);
        return r;
    }();
    return runs;
}

Outcome desk_iterations()
{
    const auto &r = desk_runs().main;
    int worst = 0;
    bool all_converged = true;
    for (const auto &cv : r.convergence) {
        worst = std::max(worst, cv.iterations);
        all_converged = all_converged && cv.converged;
    }
    return {!r.convergence.empty() && all_converged && worst <= kMaxDeskIterations,
            std::to_string(r.convergence.size()) + " runs, max iterations " + std::to_string(worst)};
}

Outcome desk_gains()
{
    const auto &r = desk_runs().main;
    const auto l2 = r.se_samples("level2", PowerMode::Full);
    const auto opt = r.se_samples("level3-opt", PowerMode::Full);
    const auto nopt = r.se_samples("level3-nopt", PowerMode::Full);
    bool dominates = l2.size() == opt.size() && !l2.empty();
    for (std::size_t i = 0; dominates && i < l2.size(); ++i)
        dominates = opt[i] >= l2[i] - kOptimalityTol * std::max(1.0, opt[i]);
    const double gain = median(opt) / median(l2) - 1.0;
    const double share = median(nopt) / median(opt);

    // Full interference sets reproduce the optimal weights.
    const auto c = desk_config();
    double worst_full = 0;
    for (int s = 0; s < 5; ++s) {
        const auto setup = generate_setup(c, s);
        const auto dcc = assign_pilots_and_clusters(setup, c);
        const std::vector<double> eta(c.K, c.rho_u);
        const auto stats = estimate_lsfd_statistics(setup, dcc, c, eta);
        std::vector<int> all(c.K);
        std::iota(all.begin(), all.end(), 0);
        for (int k = 0; k < c.K; ++k) {
            const double a = sinr(stats, eta, k, optimal_lsfd(stats, eta, k).a);
            const double b = sinr(stats, eta, k, nearly_optimal_lsfd(stats, eta, k, all).a);
            worst_full = std::max(worst_full, oracle::rel_diff(a, b));
        }
    }
    return {dominates && gain >= kMedianGain && share >= kNoptShare && worst_full <= kFullSetTol,
            std::string("opt>=level2 per UE ") + (dominates ? "yes" : "no") + ", median gain " + fmt(gain) +
                ", n-opt/opt median " + fmt(share) + ", full-set gap " + fmt(worst_full)};
}

Outcome desk_maxmin()
{
    const auto &r = desk_runs().main;
    const auto full = r.min_se_per_setup("level3-opt", PowerMode::Full);
    const auto mm = r.min_se_per_setup("level3-opt", PowerMode::MaxMin);
    if (full.empty() || full.size() != mm.size())
        return {false, "missing per-setup minima"};
    std::size_t better = 0;
    for (std::size_t i = 0; i < full.size(); ++i)
        better += mm[i] >= full[i];
    const double share = static_cast<double>(better) / full.size();
    return {share >= kMaxMinShare, std::to_string(better) + "/" + std::to_string(full.size()) + " setups"};
}

Outcome thread_determinism()
{
    const auto &r = desk_runs();
    const bool same = per_ue_csv(r.main) == per_ue_csv(r.threaded) && cdf_csv(r.main) == cdf_csv(r.threaded) &&
                      accounting_csv(r.main) == accounting_csv(r.threaded) &&
                      trace_csv(r.main) == trace_csv(r.threaded);
    return {same, same ? "1 and 4 threads byte-identical" : "outputs differ between 1 and 4 threads"};
}

} // namespace

int main()
{
    report("1", "complexity and fronthaul counts", table_counts);
    report("2", "optimal LSFD dominates all weights", lsfd_optimality);
    report("3", "max-min fixed point matches oracles", maxmin_oracle);
    report("4", "fixed point iteration budget", desk_iterations);
    report("5", "MMSE estimate moments", estimator_moments);
    report("6", "desk campaign LSFD gains", desk_gains);
    report("7", "max-min improves worst UE", desk_maxmin);
    report("8", "thread-count determinism", thread_determinism);
    std::printf("%d failure(s)\n", failures);
    return failures == 0 ? 0 : 1;
}
