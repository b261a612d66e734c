#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cfmimo/network.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace cfmimo;

namespace {

SimConfig desk()
{
    SimConfig c;
    c.L = 25;
    c.K = 10;
    c.tau_p = 5;
    return c;
}

bool hermitian_psd(const CMat &R)
{
    const double tr = R.trace().real();
    const double asym = (R - R.adjoint()).norm() / R.norm();
    return asym <= 1e-12 && min_eigenvalue(R) >= -1e-12 * tr;
}

} // namespace

TEST_CASE("generate_setup drops every node inside the square")
{
    SimConfig c;
    const auto s = generate_setup(c, 0);
    REQUIRE(s.ap_positions.size() == 100);
    REQUIRE(s.ue_positions.size() == 40);
    for (const auto &p : s.ap_positions)
        for (double x : p)
            CHECK((x >= 0.0 && x < 1000.0));
    for (const auto &p : s.ue_positions)
        for (double x : p)
            CHECK((x >= 0.0 && x < 1000.0));
    CHECK(s.corr.size() == 4000);
}

TEST_CASE("generate_setup is a pure function of seed and setup index")
{
    const auto c = desk();
    const auto a = generate_setup(c, 3);
    const auto b = generate_setup(c, 3);
    CHECK(a.ap_positions == b.ap_positions);
    CHECK(a.ue_positions == b.ue_positions);
    for (std::size_t i = 0; i < a.corr.size(); ++i)
        CHECK(a.corr[i] == b.corr[i]);
    const auto other = generate_setup(c, 4);
    CHECK(other.ue_positions != a.ue_positions);
}

TEST_CASE("single-link setup")
{
    SimConfig c;
    c.L = 1;
    c.K = 1;
    const auto s = generate_setup(c, 0);
    REQUIRE(s.corr.size() == 1);
    CHECK(s.corr[0].rows() == 4);
    CHECK(hermitian_psd(s.corr[0]));
}

TEST_CASE("correlation matrices are Hermitian PSD with trace N beta")
{
    const auto c = desk();
    for (int setup = 0; setup < 5; ++setup) {
        const auto s = generate_setup(c, setup);
        for (int l = 0; l < s.L; ++l)
            for (int k = 0; k < s.K; ++k) {
                const CMat &R = s.R(k, l);
                CHECK(hermitian_psd(R));
                CHECK(s.beta(k, l) > 0);
                CHECK(R.trace().real() / c.N == doctest::Approx(s.beta(k, l)).epsilon(1e-14));
            }
    }
}

TEST_CASE("zero angular spread gives a single plane wave")
{
    const double angle = 0.7;
    const CMat R = local_scattering_correlation(4, angle, 1e-9);
    CVec a(4);
    for (int n = 0; n < 4; ++n)
        a[n] = std::polar(1.0, std::numbers::pi * n * std::sin(angle));
    const CMat outer = a * a.adjoint();
    CHECK((R - outer).norm() < 1e-12);
}

TEST_CASE("pathloss at 100 m matches a hand evaluation")
{
    SimConfig c; // -30.5 - 36.7 log10(d), 10 m height
    const Point ap{500.0, 500.0};
    const Point ue{600.0, 500.0};
    const CMat R = spatial_correlation(ap, ue, c, 2.5);
    // -30.5 - 36.7*log10(sqrt(100^2 + 10^2)) + 2.5 dB = -101.47929720891149 dB
    CHECK(R.trace().real() / 4 == doctest::Approx(7.113286141174042e-11).epsilon(1e-12));
}

TEST_CASE("minimum distance is clamped")
{
    SimConfig c;
    const Point p{200.0, 200.0};
    const double at_zero = large_scale_gain(0.0, 0.0, c);
    CHECK(at_zero == large_scale_gain(c.min_distance, 0.0, c));
    CHECK(std::isfinite(spatial_correlation(p, p, c, 0.0).norm()));
}

TEST_CASE("wrap-around: mirror images across the boundary see the same pathloss")
{
    SimConfig c;
    const Point ap{10.0, 500.0};
    const auto left = wrapped_offset(ap, {990.0, 500.0}, c.area_side);
    const auto right = wrapped_offset(ap, {30.0, 500.0}, c.area_side);
    CHECK(left.distance == doctest::Approx(20.0));
    CHECK(right.distance == doctest::Approx(20.0));
    CHECK(large_scale_gain(left.distance, 0, c) == doctest::Approx(large_scale_gain(right.distance, 0, c)));
}

TEST_CASE("wrap-around: lattice translations leave every gain unchanged")
{
    SimConfig c;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, c.area_side);
    for (int trial = 0; trial < 200; ++trial) {
        const Point ap{u(rng), u(rng)}, ue{u(rng), u(rng)};
        const double tx = u(rng), ty = u(rng);
        auto shift = [&](const Point &p) {
            return Point{std::fmod(p[0] + tx, c.area_side), std::fmod(p[1] + ty, c.area_side)};
        };
        const double g0 = large_scale_gain(wrapped_offset(ap, ue, c.area_side).distance, 0, c);
        const double g1 = large_scale_gain(wrapped_offset(shift(ap), shift(ue), c.area_side).distance, 0, c);
        CHECK(std::abs(g0 - g1) <= 1e-12 * g0);
    }
}

TEST_CASE("enough pilots gives orthogonal pilots")
{
    auto c = desk();
    c.tau_p = 10;
    const auto s = generate_setup(c, 1);
    const auto d = assign_pilots_and_clusters(s, c);
    d.check_invariants();
    for (int k = 0; k < c.K; ++k)
        CHECK(d.copilot_sets[k] == std::vector<int>{k});
}

TEST_CASE("single AP serves both of its UEs on one pilot")
{
    SimConfig c;
    c.L = 1;
    c.K = 2;
    c.tau_p = 1;
    const auto s = generate_setup(c, 0);
    const auto d = assign_pilots_and_clusters(s, c);
    CHECK(d.pilot_of == std::vector<int>{0, 0});
    CHECK(d.served_sets[0] == std::vector<int>{0, 1});
    d.check_invariants(false);
}

TEST_CASE("two APs, two UEs, UE i nearest to AP i")
{
    SimConfig c;
    c.L = 2;
    c.K = 2;
    c.tau_p = 2;
    c.shadow_std_db = 0;
    NetworkSetup s;
    s.L = 2;
    s.K = 2;
    s.N = c.N;
    s.ap_positions = {Point{200, 500}, Point{800, 500}};
    s.ue_positions = {Point{250, 500}, Point{700, 520}};
    for (int l = 0; l < 2; ++l)
        for (int k = 0; k < 2; ++k) {
            s.corr.push_back(spatial_correlation(s.ap_positions[l], s.ue_positions[k], c, 0.0));
            s.gain.push_back(s.corr.back().trace().real() / c.N);
        }
    // Brute force over the 2x2 trace table: masters are the argmax per UE,
    // UE 0 takes pilot 0 (no contamination anywhere), UE 1 prefers the empty
    // pilot 1 because trace(R_{0,AP1}) > 0.
    const auto d = assign_pilots_and_clusters(s, c);
    CHECK(d.master_of == std::vector<int>{0, 1});
    CHECK(d.pilot_of == std::vector<int>{0, 1});
    CHECK(d.serves(0, 0));
    CHECK(d.serves(1, 1));
    d.check_invariants();
}

TEST_CASE("random setups satisfy the DCC invariants")
{
    const auto c = desk();
    for (int setup = 0; setup < 30; ++setup) {
        const auto s = generate_setup(c, setup);
        const auto d = assign_pilots_and_clusters(s, c);
        std::vector<int> appointed(c.L, 0);
        for (int m : d.master_of)
            ++appointed[m];
        const bool capacity = *std::max_element(appointed.begin(), appointed.end()) <= c.tau_p;
        CHECK_NOTHROW(d.check_invariants(capacity));
        for (int k = 0; k < c.K; ++k)
            CHECK(d.serves(d.master_of[k], k));
        const auto again = assign_pilots_and_clusters(s, c);
        CHECK(again.serving_sets == d.serving_sets);
    }
}

TEST_CASE("check_invariants reports a broken duality")
{
    auto d = make_dcc(2, 2, {0, 1}, {{0}, {0, 1}});
    CHECK_NOTHROW(d.check_invariants());
    d.served_sets[1].clear();
    CHECK_THROWS_AS(d.check_invariants(), std::logic_error);
    auto e = make_dcc(2, 2, {0, 1}, {{}, {0, 1}});
    CHECK_THROWS_AS(e.check_invariants(), std::logic_error);
}

TEST_CASE("all_serving keeps pilots and fills every cluster")
{
    const auto d = all_serving(make_dcc(3, 2, {0, 1, 0}, {{0}, {1}, {2}}));
    CHECK(d.pilot_of == std::vector<int>{0, 1, 0});
    for (const auto &M : d.serving_sets)
        CHECK(M == std::vector<int>{0, 1, 2});
    d.check_invariants(false);
}

TEST_CASE("positions CSV")
{
    SimConfig c;
    c.L = 2;
    c.K = 1;
    const auto csv = positions_csv(generate_setup(c, 0));
    CHECK(csv.rfind("entity,index,x_m,y_m\nap,0,", 0) == 0);
    CHECK(csv.find("\nue,0,") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}
