#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cfmimo/config.hpp"

using namespace cfmimo;

TEST_CASE("config file parsing")
{
    const auto cfg = parse_config(R"(
# comment line
L = 25          # trailing comment
K=10
tau_p = 5
combiner_kind = MR
lsfd_mode = level3-nopt
power_mode = maxmin
seed = 18446744073709551615
)");
    CHECK(cfg.L == 25);
    CHECK(cfg.K == 10);
    CHECK(cfg.tau_p == 5);
    CHECK(cfg.N == 4);
    CHECK(cfg.combiner_kind == CombinerKind::MR);
    CHECK(cfg.lsfd_mode == LsfdMode::Level3NOpt);
    CHECK(cfg.power_mode == PowerMode::MaxMin);
    CHECK(cfg.seed == 18446744073709551615ULL);
}

TEST_CASE("defaults match the reference scenario")
{
    SimConfig cfg;
    CHECK(cfg.L == 100);
    CHECK(cfg.N == 4);
    CHECK(cfg.K == 40);
    CHECK(cfg.tau_c == 200);
    CHECK(cfg.tau_p == 10);
    CHECK(cfg.rho_u == doctest::Approx(0.1));
    CHECK(cfg.fp_tol == doctest::Approx(1e-3));
    CHECK(cfg.sigma2 == doctest::Approx(1e-3 * std::pow(10.0, -9.4)).epsilon(1e-12));
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("to_text round trips")
{
    SimConfig cfg;
    cfg.K = 7;
    cfg.sigma2 = 1.2345678901234567e-13;
    cfg.combiner_kind = CombinerKind::MR;
    const auto back = parse_config(cfg.to_text());
    CHECK(back.to_text() == cfg.to_text());
    CHECK(back.sigma2 == cfg.sigma2);
}

TEST_CASE("invalid configurations are rejected")
{
    CHECK_THROWS_AS(parse_config("tau_p = 200\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("tau_p = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("rho_u = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("sigma2 = -1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("R_design = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("K = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("bogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("L = ten\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("L = 3.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("no equals sign\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("combiner_kind = ZF\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), ConfigError);
}
