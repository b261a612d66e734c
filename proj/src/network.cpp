#include "cfmimo/network.hpp"

#include "cfmimo/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace cfmimo {

bool DccAssignment::serves(int l, int k) const
{
    const auto &M = serving_sets[k];
    return std::binary_search(M.begin(), M.end(), l);
}

int DccAssignment::serving_index(int k, int l) const
{
    const auto &M = serving_sets[k];
    const auto it = std::lower_bound(M.begin(), M.end(), l);
    if (it == M.end() || *it != l)
        return -1;
    return static_cast<int>(it - M.begin());
}

void DccAssignment::check_invariants(bool check_pilot_capacity) const
{
    auto fail = [](const std::string &msg) { throw std::logic_error("DCC invariant violated: " + msg); };
    if (static_cast<int>(pilot_of.size()) != K || static_cast<int>(serving_sets.size()) != K ||
        static_cast<int>(copilot_sets.size()) != K || static_cast<int>(served_sets.size()) != L)
        fail("size mismatch");
    for (int k = 0; k < K; ++k) {
        if (pilot_of[k] < 0 || pilot_of[k] >= tau_p)
            fail("pilot index out of range for UE " + std::to_string(k));
        const auto &P = copilot_sets[k];
        if (!std::binary_search(P.begin(), P.end(), k))
            fail("UE " + std::to_string(k) + " missing from its co-pilot set");
        for (int i = 0; i < K; ++i) {
            const bool in = std::binary_search(P.begin(), P.end(), i);
            if (in != (pilot_of[i] == pilot_of[k]))
                fail("co-pilot set of UE " + std::to_string(k) + " inconsistent with pilots");
        }
        if (serving_sets[k].empty())
            fail("UE " + std::to_string(k) + " has no serving AP");
        if (!std::is_sorted(serving_sets[k].begin(), serving_sets[k].end()))
            fail("serving set not sorted");
    }
    for (int l = 0; l < L; ++l) {
        for (int k = 0; k < K; ++k) {
            const bool in_D = std::binary_search(served_sets[l].begin(), served_sets[l].end(), k);
            if (in_D != serves(l, k))
                fail("M/D duality broken at AP " + std::to_string(l) + ", UE " + std::to_string(k));
        }
        if (check_pilot_capacity && static_cast<int>(served_sets[l].size()) > tau_p)
            fail("AP " + std::to_string(l) + " serves more UEs than pilots");
    }
}

WrappedOffset wrapped_offset(const Point &ap, const Point &ue, double side)
{
    double best = std::numeric_limits<double>::infinity();
    double bx = 0, by = 0;
    for (int i = -1; i <= 1; ++i) {
        for (int j = -1; j <= 1; ++j) {
            const double dx = ue[0] + i * side - ap[0];
            const double dy = ue[1] + j * side - ap[1];
            const double d = std::hypot(dx, dy);
            if (d < best) {
                best = d;
                bx = dx;
                by = dy;
            }
        }
    }
    return {best, std::atan2(by, bx)};
}

double large_scale_gain(double horizontal_distance, double shadow_db, const SimConfig &config)
{
    const double dh = std::max(horizontal_distance, config.min_distance);
    const double d = std::hypot(dh, config.ap_height);
    const double db = config.pathloss_alpha - config.pathloss_beta * std::log10(d) + shadow_db;
    return std::pow(10.0, db / 10.0);
}

CMat local_scattering_correlation(int N, double angle, double asd)
{
    // Antenna spacing is half a wavelength; the angular deviation is Gaussian
    // and linearized around the nominal angle.
    CMat R(N, N);
    for (int m = 0; m < N; ++m) {
        for (int n = 0; n < N; ++n) {
            const double d = 0.5 * (m - n);
            const double phase = 2.0 * std::numbers::pi * d * std::sin(angle);
            const double spread = 2.0 * std::numbers::pi * d * std::cos(angle) * asd;
            R(m, n) = std::polar(std::exp(-0.5 * spread * spread), phase);
        }
    }
    return R;
}

CMat spatial_correlation(const Point &ap, const Point &ue, const SimConfig &config, double shadow_db)
{
    const auto off = wrapped_offset(ap, ue, config.area_side);
    const double beta = large_scale_gain(off.distance, shadow_db, config);
    const double asd = config.asd_deg * std::numbers::pi / 180.0;
    CMat R = beta * local_scattering_correlation(config.N, off.bearing, asd);
    make_hermitian(R);
    return R;
}

NetworkSetup generate_setup(const SimConfig &config, int setup_index)
{
    NetworkSetup s;
    s.setup_index = setup_index;
    s.L = config.L;
    s.N = config.N;
    s.K = config.K;
    auto geo = make_engine(config.seed, static_cast<std::uint64_t>(setup_index), 0, Stream::Geometry);
    std::uniform_real_distribution<double> uni(0.0, config.area_side);
    s.ap_positions.resize(config.L);
    for (auto &p : s.ap_positions) {
        p[0] = uni(geo);
        p[1] = uni(geo);
    }
    s.ue_positions.resize(config.K);
    for (auto &p : s.ue_positions) {
        p[0] = uni(geo);
        p[1] = uni(geo);
    }
    auto shadow_eng = make_engine(config.seed, static_cast<std::uint64_t>(setup_index), 0, Stream::Shadowing);
    std::normal_distribution<double> shadow(0.0, 1.0);
    const std::size_t links = static_cast<std::size_t>(config.L) * config.K;
    s.corr.resize(links);
    s.gain.resize(links);
    for (int l = 0; l < config.L; ++l) {
        for (int k = 0; k < config.K; ++k) {
            const double sh = config.shadow_std_db * shadow(shadow_eng);
            const std::size_t idx = static_cast<std::size_t>(l) * config.K + k;
            s.corr[idx] = spatial_correlation(s.ap_positions[l], s.ue_positions[k], config, sh);
            s.gain[idx] = s.corr[idx].trace().real() / config.N;
        }
    }
    return s;
}

namespace {

void fill_derived_sets(DccAssignment &d)
{
    d.copilot_sets.assign(d.K, {});
    for (int k = 0; k < d.K; ++k)
        for (int i = 0; i < d.K; ++i)
            if (d.pilot_of[i] == d.pilot_of[k])
                d.copilot_sets[k].push_back(i);
    d.served_sets.assign(d.L, {});
    for (int k = 0; k < d.K; ++k) {
        std::sort(d.serving_sets[k].begin(), d.serving_sets[k].end());
        d.serving_sets[k].erase(std::unique(d.serving_sets[k].begin(), d.serving_sets[k].end()),
                                d.serving_sets[k].end());
        for (int l : d.serving_sets[k])
            d.served_sets[l].push_back(k);
    }
}

} // namespace

DccAssignment assign_pilots_and_clusters(const NetworkSetup &setup, const SimConfig &config)
{
    const int L = setup.L;
    const int K = setup.K;
    const int tau_p = config.tau_p;
    DccAssignment d;
    d.L = L;
    d.K = K;
    d.tau_p = tau_p;
    d.pilot_of.assign(K, -1);
    d.master_of.assign(K, -1);

    auto tr = [&](int k, int l) { return setup.R(k, l).trace().real(); };

    std::vector<int> appointed(L, 0);
    for (int k = 0; k < K; ++k) {
        int master = 0;
        for (int l = 1; l < L; ++l)
            if (tr(k, l) > tr(k, master))
                master = l;
        d.master_of[k] = master;

        // Pilots already held by UEs of the same master are skipped while a
        // free one remains, so that the master can serve all of them.
        std::vector<char> taken(tau_p, 0);
        for (int i = 0; i < k; ++i)
            if (d.master_of[i] == master)
                taken[d.pilot_of[i]] = 1;
        const bool has_free = appointed[master] < tau_p;

        int best = -1;
        double best_val = std::numeric_limits<double>::infinity();
        for (int t = 0; t < tau_p; ++t) {
            if (has_free && taken[t])
                continue;
            double contamination = 0.0;
            for (int i = 0; i < k; ++i)
                if (d.pilot_of[i] == t)
                    contamination += tr(i, master);
            if (contamination < best_val) {
                best_val = contamination;
                best = t;
            }
        }
        d.pilot_of[k] = best;
        ++appointed[master];
    }

    d.serving_sets.assign(K, {});
    for (int l = 0; l < L; ++l) {
        for (int t = 0; t < tau_p; ++t) {
            bool master_here = false;
            for (int k = 0; k < K; ++k) {
                if (d.pilot_of[k] == t && d.master_of[k] == l) {
                    d.serving_sets[k].push_back(l);
                    master_here = true;
                }
            }
            if (master_here)
                continue;
            int best = -1;
            for (int k = 0; k < K; ++k)
                if (d.pilot_of[k] == t && (best < 0 || tr(k, l) > tr(best, l)))
                    best = k;
            if (best >= 0)
                d.serving_sets[best].push_back(l);
        }
    }
    fill_derived_sets(d);
    return d;
}

DccAssignment make_dcc(int L, int tau_p, const std::vector<int> &pilot_of,
                       const std::vector<std::vector<int>> &serving_sets)
{
    DccAssignment d;
    d.L = L;
    d.K = static_cast<int>(pilot_of.size());
    d.tau_p = tau_p;
    d.pilot_of = pilot_of;
    d.master_of.assign(d.K, -1);
    d.serving_sets = serving_sets;
    if (static_cast<int>(d.serving_sets.size()) != d.K)
        throw std::invalid_argument("make_dcc: one serving set per UE required");
    for (const auto &M : d.serving_sets)
        for (int l : M)
            if (l < 0 || l >= L)
                throw std::invalid_argument("make_dcc: AP index out of range");
    fill_derived_sets(d);
    return d;
}

DccAssignment all_serving(const DccAssignment &base)
{
    std::vector<std::vector<int>> M(base.K);
    for (auto &m : M)
        for (int l = 0; l < base.L; ++l)
            m.push_back(l);
    DccAssignment d = make_dcc(base.L, base.tau_p, base.pilot_of, M);
    d.master_of = base.master_of;
    return d;
}

std::string positions_csv(const NetworkSetup &setup)
{
    std::ostringstream os;
    os.precision(17);
    os << "entity,index,x_m,y_m\n";
    for (int l = 0; l < setup.L; ++l)
        os << "ap," << l << ',' << setup.ap_positions[l][0] << ',' << setup.ap_positions[l][1] << '\n';
    for (int k = 0; k < setup.K; ++k)
        os << "ue," << k << ',' << setup.ue_positions[k][0] << ',' << setup.ue_positions[k][1] << '\n';
    return os.str();
}

} // namespace cfmimo
