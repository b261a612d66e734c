#include "cfmimo/combining.hpp"

#include "cfmimo/digest.hpp"
#include "cfmimo/parallel.hpp"
#include "cfmimo/rng.hpp"

#include <algorithm>
#include <string>

namespace cfmimo {

std::vector<CVec> mr_combiner(std::span<const CVec> estimates)
{
    return {estimates.begin(), estimates.end()};
}

std::vector<CVec> partial_mmse_combiner(std::span<const CVec> estimates, std::span<const CMat> err_covs,
                                        std::span<const double> eta, double sigma2)
{
    if (estimates.size() != err_covs.size() || estimates.size() != eta.size())
        throw std::invalid_argument("partial_mmse_combiner: size mismatch");
    if (estimates.empty())
        return {};
    const Eigen::Index N = estimates.front().size();
    CMat A = sigma2 * CMat::Identity(N, N);
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        A.noalias() += eta[i] * (estimates[i] * estimates[i].adjoint());
        A += eta[i] * err_covs[i];
    }
    make_hermitian(A);
    HermitianSolver solver(A);
    if (!solver.ok())
        throw CombinerError("partial MMSE combiner: singular system");
    std::vector<CVec> v;
    v.reserve(estimates.size());
    for (std::size_t i = 0; i < estimates.size(); ++i)
        v.push_back(eta[i] * solver.solve(estimates[i]));
    return v;
}

CMat UeStatistics::g_second(int i) const
{
    const int m = size();
    const CVec mu = cross_mean.col(i);
    CMat G(m, m);
    for (int a = 0; a < m; ++a) {
        G(a, a) = second(a, i);
        for (int b = a + 1; b < m; ++b) {
            G(a, b) = mu[a] * std::conj(mu[b]);
            G(b, a) = std::conj(G(a, b));
        }
    }
    return G;
}

namespace {

struct Accumulator {
    std::vector<CMat> cross;
    std::vector<Eigen::MatrixXd> second;
    std::vector<RVec> norm2;

    Accumulator(const DccAssignment &dcc)
    {
        for (int k = 0; k < dcc.K; ++k) {
            const auto m = static_cast<Eigen::Index>(dcc.serving_sets[k].size());
            cross.push_back(CMat::Zero(m, dcc.K));
            second.push_back(Eigen::MatrixXd::Zero(m, dcc.K));
            norm2.push_back(RVec::Zero(m));
        }
    }

    void add(const Accumulator &o)
    {
        for (std::size_t k = 0; k < cross.size(); ++k) {
            cross[k] += o.cross[k];
            second[k] += o.second[k];
            norm2[k] += o.norm2[k];
        }
    }
};

void run_trial(const NetworkSetup &setup, const DccAssignment &dcc, const SimConfig &config,
               const CorrelationRoots &roots, const EstimatorBank &bank, std::span<const double> eta,
               int trial, Accumulator &acc)
{
    const auto setup_idx = static_cast<std::uint64_t>(setup.setup_index);
    auto ch_eng = make_engine(config.seed, setup_idx, static_cast<std::uint64_t>(trial), Stream::Channel);
    auto noise_eng = make_engine(config.seed, setup_idx, static_cast<std::uint64_t>(trial), Stream::PilotNoise);
    const auto real = sample_channels(roots, ch_eng);
    const auto pilots = pilot_sufficient_statistic(real, dcc, config, noise_eng);
    const auto est = estimate_channels(bank, pilots, dcc);

    std::vector<CVec> h_hat;
    std::vector<CMat> err;
    std::vector<double> p;
    for (int l = 0; l < setup.L; ++l) {
        const auto &D = dcc.served_sets[l];
        if (D.empty())
            continue;
        h_hat.clear();
        err.clear();
        p.clear();
        for (int k : D) {
            const int j = dcc.serving_index(k, l);
            h_hat.push_back(est.h_hat[k][j]);
            err.push_back(bank.err_cov[k][j]);
            p.push_back(eta[k]);
        }
        std::vector<CVec> v;
        if (config.combiner_kind == CombinerKind::MR)
            v = mr_combiner(h_hat);
        else
            v = partial_mmse_combiner(h_hat, err, p, config.sigma2);
        for (std::size_t d = 0; d < D.size(); ++d) {
            const int k = D[d];
            const int j = dcc.serving_index(k, l);
            for (int i = 0; i < setup.K; ++i) {
                const cd g = v[d].dot(real.at(i, l)); // v^H h
                acc.cross[k](j, i) += g;
                acc.second[k](j, i) += std::norm(g);
            }
            acc.norm2[k][j] += v[d].squaredNorm();
        }
    }
}

} // namespace

LsfdStatistics estimate_lsfd_statistics(const NetworkSetup &setup, const DccAssignment &dcc,
                                        const SimConfig &config, std::span<const double> eta, int threads,
                                        int first_trial)
{
    if (static_cast<int>(eta.size()) != setup.K)
        throw std::invalid_argument("estimate_lsfd_statistics: one power per UE required");
    const int trials = config.mc_trials;
    if (trials < 1)
        throw std::invalid_argument("estimate_lsfd_statistics: mc_trials must be >= 1");

    const auto roots = correlation_roots(setup);
    const auto bank = build_estimators(setup, dcc, config);

    // Fixed chunking keeps the summation order independent of the thread count.
    constexpr int kChunk = 8;
    const int chunks = (trials + kChunk - 1) / kChunk;
    std::vector<Accumulator> partial(chunks, Accumulator(dcc));
    parallel_for(static_cast<std::size_t>(chunks), threads, [&](std::size_t c) {
        const int begin = static_cast<int>(c) * kChunk;
        const int end = std::min(trials, begin + kChunk);
        for (int t = begin; t < end; ++t) {
            try {
                run_trial(setup, dcc, config, roots, bank, eta, first_trial + t, partial[c]);
            } catch (const std::exception &e) {
                throw std::runtime_error("trial " + std::to_string(first_trial + t) + ": " + e.what());
            }
        }
    });
    Accumulator total(dcc);
    for (const auto &p : partial)
        total.add(p);

    LsfdStatistics stats;
    stats.K = setup.K;
    stats.trials_used = trials;
    const double inv = 1.0 / trials;
    for (int k = 0; k < setup.K; ++k) {
        UeStatistics u;
        u.ue = k;
        u.serving = dcc.serving_sets[k];
        u.cross_mean = total.cross[k] * inv;
        u.second = total.second[k] * inv;
        // Sample second moments dominate |sample mean|^2 up to rounding.
        u.second = u.second.cwiseMax(u.cross_mean.cwiseAbs2());
        u.noise = config.sigma2 * inv * total.norm2[k];
        stats.ue.push_back(std::move(u));
    }
    return stats;
}

nlohmann::json statistics_to_json(const LsfdStatistics &stats)
{
    using nlohmann::json;
    json j;
    j["K"] = stats.K;
    j["trials_used"] = stats.trials_used;
    j["ue"] = json::array();
    for (const auto &u : stats.ue) {
        json e;
        e["ue"] = u.ue;
        e["serving"] = u.serving;
        const auto m = u.cross_mean.rows();
        std::vector<double> re, im, sec;
        for (Eigen::Index a = 0; a < m; ++a)
            for (int i = 0; i < stats.K; ++i) {
                re.push_back(u.cross_mean(a, i).real());
                im.push_back(u.cross_mean(a, i).imag());
                sec.push_back(u.second(a, i));
            }
        e["cross_mean_re"] = re;
        e["cross_mean_im"] = im;
        e["second"] = sec;
        e["noise"] = std::vector<double>(u.noise.data(), u.noise.data() + u.noise.size());
        j["ue"].push_back(std::move(e));
    }
    return j;
}

LsfdStatistics statistics_from_json(const nlohmann::json &j)
{
    LsfdStatistics stats;
    stats.K = j.at("K").get<int>();
    stats.trials_used = j.at("trials_used").get<int>();
    for (const auto &e : j.at("ue")) {
        UeStatistics u;
        u.ue = e.at("ue").get<int>();
        u.serving = e.at("serving").get<std::vector<int>>();
        const auto re = e.at("cross_mean_re").get<std::vector<double>>();
        const auto im = e.at("cross_mean_im").get<std::vector<double>>();
        const auto sec = e.at("second").get<std::vector<double>>();
        const auto noise = e.at("noise").get<std::vector<double>>();
        const auto m = static_cast<Eigen::Index>(u.serving.size());
        const auto expected = static_cast<std::size_t>(m) * stats.K;
        if (re.size() != expected || im.size() != expected || sec.size() != expected ||
            noise.size() != static_cast<std::size_t>(m))
            throw std::invalid_argument("statistics JSON: array sizes do not match serving set");
        u.cross_mean.resize(m, stats.K);
        u.second.resize(m, stats.K);
        std::size_t p = 0;
        for (Eigen::Index a = 0; a < m; ++a)
            for (int i = 0; i < stats.K; ++i, ++p) {
                u.cross_mean(a, i) = {re[p], im[p]};
                u.second(a, i) = sec[p];
            }
        u.noise = Eigen::Map<const RVec>(noise.data(), m);
        stats.ue.push_back(std::move(u));
    }
    return stats;
}

std::string statistics_cache_key(const SimConfig &config, int setup_index, const std::string &tag)
{
    std::uint64_t h = fnv1a(config.to_text());
    h = fnv1a(std::to_string(setup_index), h);
    h = fnv1a(tag, h);
    return hex_digest(h);
}

} // namespace cfmimo
