#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace cfmimo {

// Stream tags keep the substreams of one (seed, setup, trial) triple apart.
enum class Stream : std::uint64_t {
    Geometry = 1,
    Shadowing = 2,
    Channel = 3,
    PilotNoise = 4,
};

constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t setup, std::uint64_t trial, Stream tag)
{
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ setup);
    h = splitmix64(h ^ trial);
    return splitmix64(h ^ static_cast<std::uint64_t>(tag));
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed, std::uint64_t setup, std::uint64_t trial, Stream tag)
{
    return Engine(substream_seed(seed, setup, trial, tag));
}

// CN(0, 1) sample.
inline std::complex<double> complex_normal(Engine &eng)
{
    std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
    const double re = nd(eng);
    const double im = nd(eng);
    return {re, im};
}

} // namespace cfmimo
