#include "cfmimo/accounting.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <stdexcept>

namespace cfmimo {

Rational::Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den)
{
    if (den_ == 0)
        throw std::invalid_argument("Rational: zero denominator");
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    const auto g = std::gcd(num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
}

Rational &Rational::operator+=(const Rational &o)
{
    const auto g = std::gcd(den_, o.den_);
    const auto lcm = den_ / g * o.den_;
    *this = Rational(num_ * (lcm / den_) + o.num_ * (lcm / o.den_), lcm);
    return *this;
}

Rational operator*(const Rational &a, const Rational &b)
{
    const auto g1 = std::gcd(a.num_, b.den_);
    const auto g2 = std::gcd(b.num_, a.den_);
    const auto n1 = g1 ? a.num_ / g1 : 0, d2 = g1 ? b.den_ / g1 : b.den_;
    const auto n2 = g2 ? b.num_ / g2 : 0, d1 = g2 ? a.den_ / g2 : a.den_;
    return Rational(n1 * n2, d1 * d2);
}

Rational operator/(const Rational &a, const Rational &b)
{
    if (b.num_ == 0)
        throw std::invalid_argument("Rational: division by zero");
    return a * Rational(b.den_, b.num_);
}

bool operator<(const Rational &a, const Rational &b)
{
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
}

std::string Rational::to_string() const
{
    if (den_ == 1)
        return std::to_string(num_);
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, to_double());
    return std::string(buf, res.ptr);
}

std::int64_t lsfd_complexity(std::int64_t m)
{
    if (m < 1)
        throw std::invalid_argument("lsfd_complexity: cluster size must be >= 1");
    // m^3 - m = (m-1) m (m+1) is a product of three consecutive integers.
    return m * m + (m * m * m - m) / 3;
}

namespace {

std::int64_t served_links(const DccAssignment &dcc)
{
    std::int64_t n = 0;
    for (const auto &D : dcc.served_sets)
        n += static_cast<std::int64_t>(D.size());
    return n;
}

} // namespace

Count fronthaul_uplink_count(const DccAssignment &dcc, int tau_c, int tau_p)
{
    const Rational total(static_cast<std::int64_t>(tau_c - tau_p) * served_links(dcc));
    return {total, dcc.K > 0 ? total / Rational(dcc.K) : Rational(0)};
}

Count fronthaul_stats_count(const DccAssignment &dcc, int K, LsfdMode mode,
                            const std::vector<std::vector<int>> *sets)
{
    Rational total;
    switch (mode) {
    case LsfdMode::Level2:
        break;
    case LsfdMode::Level3Opt:
        total = Rational(3 * static_cast<std::int64_t>(K) + 1, 2) * Rational(served_links(dcc));
        break;
    case LsfdMode::Level3NOpt:
        if (!sets)
            throw std::invalid_argument("fronthaul_stats_count: interference sets required");
        for (const auto &D : dcc.served_sets)
            for (int k : D)
                total += Rational(3 * static_cast<std::int64_t>((*sets)[k].size()) + 1, 2);
        break;
    }
    return {total, K > 0 ? total / Rational(K) : Rational(0)};
}

FronthaulReport fronthaul_report(const DccAssignment &dcc, const SimConfig &config, LsfdMode mode,
                                 const std::vector<std::vector<int>> *sets)
{
    FronthaulReport r;
    std::int64_t sum = 0;
    for (const auto &M : dcc.serving_sets) {
        const std::int64_t c = mode == LsfdMode::Level2 ? 0 : lsfd_complexity(static_cast<std::int64_t>(M.size()));
        r.lsfd_mults_per_ue.push_back(c);
        sum += c;
    }
    r.lsfd_mults_total = Rational(sum);
    r.lsfd_mults_avg = dcc.K > 0 ? Rational(sum, dcc.K) : Rational(0);
    r.uplink = fronthaul_uplink_count(dcc, config.tau_c, config.tau_p);
    r.stats = fronthaul_stats_count(dcc, dcc.K, mode, sets);
    return r;
}

std::vector<std::pair<double, double>> empirical_cdf(std::vector<double> samples)
{
    if (samples.empty())
        throw std::invalid_argument("empirical_cdf: no samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    std::vector<std::pair<double, double>> cdf;
    cdf.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        cdf.emplace_back(samples[i], static_cast<double>(i + 1) / n);
    return cdf;
}

} // namespace cfmimo
