#include "eemimo/config.hpp"

#include <doctest.h>

#include <cmath>
#include <string>

using namespace eemimo;

TEST_CASE("empty configuration gives the defaults") {
  const auto cfg = parse_config("");
  const auto hw = HardwareProfile::defaults();
  CHECK(cfg.profile.B == hw.B);
  CHECK(cfg.profile.P_FIX == hw.P_FIX);
  CHECK(cfg.scenario.d_max == 250);
  CHECK(cfg.regime == RegimeKind::perfect);
  CHECK(cfg.scheme == Scheme::ZF);
  CHECK(cfg.seed == 1u);
  CHECK(cfg.effective_k_range().hi == 300);
}

TEST_CASE("values and unit conversions") {
  const auto cfg = parse_config(
      "# comment\n"
      "[profile]\n"
      "p_fix_w = 90\n"
      "noise_dbm = -96\n"
      "p_cod_w_per_gbps = 0.5\n"
      "l_bs_gflops_per_w = 20\n"
      "[scenario]\n"
      "kappa = 3.1\n"
      "dbar_db = -30\n"
      "[experiment]\n"
      "scheme = mrt\n"
      "k_max = 2000\n");
  CHECK(cfg.profile.P_FIX == 90);
  CHECK(cfg.profile.noise_power == doctest::Approx(std::pow(10.0, -12.6)).epsilon(1e-12));
  CHECK(cfg.profile.P_COD == doctest::Approx(0.5e-9));
  CHECK(cfg.profile.L_BS == doctest::Approx(20e9));
  CHECK(cfg.scenario.kappa == 3.1);
  CHECK(cfg.scenario.dbar == doctest::Approx(1e-3));
  CHECK(cfg.scheme == Scheme::MRT_MRC);
  CHECK(cfg.effective_k_range().hi == 899);
}

TEST_CASE("format and parse round-trip exactly") {
  auto cfg = parse_config("[scenario]\nkappa = 3.7\n[experiment]\nregime = multicell\nreuse = 4\n");
  cfg.profile.P_BS = 0.1 + 0.2;
  cfg.seed = 123456789012345ull;
  const auto back = parse_config(format_config(cfg));
  CHECK(back.scenario.kappa == cfg.scenario.kappa);
  CHECK(back.profile.P_BS == cfg.profile.P_BS);
  CHECK(back.profile.noise_power == cfg.profile.noise_power);
  CHECK(back.seed == cfg.seed);
  CHECK(back.regime == RegimeKind::multicell);
  CHECK(back.reuse == 4);
  CHECK(format_config(back) == format_config(cfg));
  CHECK(back.effective_k_range().hi == std::min(300, static_cast<int>(cfg.profile.U / (4 + cfg.profile.tau_dl)) - 1));
}

TEST_CASE("rejected configurations") {
  CHECK_THROWS_AS(parse_config("[profile]\nzeta_ul = 0.4\nzeta_dl = 0.7\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[profile]\nbogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[nowhere]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[profile]\nnoise_w = 1e-13\nnoise_dbm = -96\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[profile]\np_fix_w = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[experiment]\nreuse = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[experiment]\nscheme = qr\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[experiment]\nm_min = 10\nm_max = 5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[experiment]\npoint_m = 10\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[scenario]\nd_min_m = 300\n"), ConfigError);
}

TEST_CASE("parse errors carry the line number") {
  try {
    parse_config("[profile]\np_fix_w = 9\n[broken\n");
    FAIL("expected a parse error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}
