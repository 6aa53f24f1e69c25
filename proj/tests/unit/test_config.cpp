#include <doctest.h>

#include <cmath>
#include <string>

#include "injphase/config.hpp"

using namespace injphase;

namespace {

const char* kReference = R"(
[master]
tau_ph_ps = 1
tau_e_ns = 1
epsilon = 0.3
N_tr = 4.0e7
N_th = 5.5e7
C_sp = 1e-5
Gamma = 0.12
alpha = 5
chi_per_W = 30
lambda_nm = 1550
)";

std::string without(const std::string& text, const std::string& key) {
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    const std::string line = text.substr(pos, end - pos);
    if (line.rfind(key + " ", 0) != 0) out += line + "\n";
    pos = end + 1;
  }
  return out;
}

std::string thrown_key(const std::string& text) {
  try {
    load_params(text);
  } catch (const ParamError& e) {
    return e.key();
  }
  return "";
}

}  // namespace

TEST_CASE("load_params reads a full laser block") {
  const auto p = load_params(kReference);
  CHECK(p.tau_ph == doctest::Approx(1e-12));
  CHECK(p.tau_e == doctest::Approx(1e-9));
  CHECK(p.alpha == 5.0);
  CHECK(p.chi == 30.0);
  CHECK(p.lambda == doctest::Approx(1.55e-6));
  CHECK_FALSE(p.V_active.has_value());
}

TEST_CASE("load_params names missing and invalid keys") {
  CHECK(thrown_key(without(kReference, "tau_ph_ps")) == "master.tau_ph_ps");
  CHECK(thrown_key(without(kReference, "alpha")) == "master.alpha");
  std::string degenerate = without(kReference, "N_th") + "N_th = 4.0e7\n";
  CHECK(thrown_key(degenerate) == "master.N_th");
  std::string text = without(kReference, "Gamma") + "Gamma = abc\n";
  CHECK(thrown_key(text) == "master.Gamma");
}

TEST_CASE("every laser key reaches its field") {
  struct Case {
    const char* key;
    const char* value;
    double LaserParams::*field;
    double expect;
  };
  const Case cases[] = {
      {"tau_ph_ps", "2", &LaserParams::tau_ph, 2e-12}, {"tau_e_ns", "1.5", &LaserParams::tau_e, 1.5e-9},
      {"epsilon", "0.4", &LaserParams::epsilon, 0.4},  {"N_tr", "3e7", &LaserParams::N_tr, 3e7},
      {"N_th", "6e7", &LaserParams::N_th, 6e7},        {"C_sp", "2e-5", &LaserParams::C_sp, 2e-5},
      {"Gamma", "0.2", &LaserParams::Gamma, 0.2},      {"alpha", "3", &LaserParams::alpha, 3.0},
      {"chi_per_W", "12", &LaserParams::chi, 12.0},    {"lambda_nm", "1310", &LaserParams::lambda, 1.31e-6},
  };
  for (const auto& c : cases)
    for (const std::string section : {"master", "slave"}) {
      CAPTURE(c.key);
      CAPTURE(section);
      const Config cfg = build_config({{section + "." + c.key, c.value}});
      const auto& changed = section == "master" ? cfg.system.master : cfg.system.slave;
      const auto& other = section == "master" ? cfg.system.slave : cfg.system.master;
      CHECK(changed.*c.field == doctest::Approx(c.expect).epsilon(1e-12));
      CHECK(other.*c.field == LaserParams{}.*c.field);
    }
  const Config v = build_config({{"slave.V_active_m3", "1e-16"}});
  REQUIRE(v.system.slave.V_active.has_value());
  CHECK(*v.system.slave.V_active == 1e-16);
}

TEST_CASE("units of coupling, thermal and drive keys") {
  const Config c = build_config({{"coupling.kappa_ex_per_s", "2e10"},
                                 {"coupling.delta_omega_hz", "1e9"},
                                 {"thermal.mu_omega_GHz_per_K", "5"},
                                 {"thermal.tau_h_ns", "20"},
                                 {"drive.I_s_mA", "25"},
                                 {"drive.d_ns", "0.2"},
                                 {"sim.dt_ps", "0.02"},
                                 {"study.kappa_list", "0, 1e9 ,1e10"}});
  CHECK(c.system.coupling.kappa_ex == 2e10);
  CHECK(c.system.coupling.delta_omega == doctest::Approx(2 * M_PI * 1e9));
  CHECK(c.system.master_thermal->mu_omega == doctest::Approx(2 * M_PI * 5e9));
  CHECK(c.system.master_thermal->tau_h == doctest::Approx(20e-9));
  CHECK(c.drive.I_s == doctest::Approx(25e-3));
  CHECK(c.drive.d == doctest::Approx(0.2e-9));
  CHECK(c.sim.dt == doctest::Approx(0.02e-12));
  CHECK(c.study.kappa_list == std::vector<double>{0, 1e9, 1e10});
}

TEST_CASE("material keys derive thermal constants unless given explicitly") {
  const Config derived = build_config({{"thermal.l_um", "3"}});
  const Config defaults = default_config();
  CHECK(derived.system.master_thermal->r_h != defaults.system.master_thermal->r_h);
  const Config pinned = build_config({{"thermal.l_um", "3"}, {"thermal.r_h_K_per_W", "7"}});
  CHECK(pinned.system.master_thermal->r_h == 7.0);
  CHECK(pinned.system.master_thermal->tau_h == derived.system.master_thermal->tau_h);
}

TEST_CASE("INI parsing") {
  const auto s = parse_settings("# comment\n[coupling]\nkappa_ex_per_s = 3e10 ; inline\n\n[sim]\nnoise = yes\n");
  CHECK(s.at("coupling.kappa_ex_per_s") == "3e10");
  const Config c = build_config(s);
  CHECK(c.sim.noise);

  CHECK_THROWS_AS(parse_settings("[coupling\nkappa_ex_per_s = 1\n"), ParamError);
  CHECK_THROWS_AS(parse_settings("kappa_ex_per_s = 1\n"), ParamError);
  CHECK_THROWS_AS(parse_settings("[nowhere]\nx = 1\n"), ParamError);
  CHECK_THROWS_AS(parse_settings("[master]\nbogus = 1\n"), ParamError);
  CHECK_NOTHROW(parse_settings("[master]\n"));
}

TEST_CASE("overrides and validation errors") {
  Settings s;
  apply_override(s, "drive.n_pulses=20");
  CHECK(s.at("drive.n_pulses") == "20");
  CHECK_THROWS_AS(apply_override(s, "drive.n_pulses"), ParamError);
  CHECK_THROWS_AS(apply_override(s, "drive.nope=1"), ParamError);

  CHECK_THROWS_AS(build_config({{"sim.dt_ps", "0.5"}}), ParamError);
  CHECK_THROWS_AS(build_config({{"drive.d_ns", "2"}}), ParamError);
  CHECK_THROWS_AS(build_config({{"drive.n_pulses", "2"}}), ParamError);
  CHECK_THROWS_AS(build_config({{"drive.n_pulses", "-3"}}), ParamError);
  CHECK_THROWS_AS(build_config({{"sim.noise", "maybe"}}), ParamError);
  CHECK_THROWS_AS(build_config({{"coupling.kappa_ex_per_s", "-1"}}), ParamError);
  CHECK_THROWS_AS(build_config({{"study.chi_list", "1,x"}}), ParamError);
  CHECK_THROWS_AS(build_config({{"master.alpha", "nan"}}), ParamError);
  try {
    build_config({{"slave.tau_ph_ps", "-1"}});
    FAIL("expected an error");
  } catch (const ParamError& e) {
    CHECK(std::string(e.what()).find("slave.tau_ph") != std::string::npos);
  }
}

TEST_CASE("known keys") {
  CHECK(is_known_key("master.tau_ph_ps"));
  CHECK(is_known_key("thermal.w_um"));
  CHECK_FALSE(is_known_key("master.tau_ph"));
  CHECK(known_keys().size() > 40);
}
