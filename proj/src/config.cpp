#include "injphase/config.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "injphase/units.hpp"

namespace injphase {

namespace {

constexpr double kPi = constants::pi;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& text, const std::string& key) {
  std::string v = trim(text);
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "off" || v == "no") return false;
  throw ParamError(key, key + ": expected a boolean, got '" + text + "'");
}

std::uint64_t parse_u64(const std::string& text, const std::string& key) {
  const std::string v = trim(text);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
    throw ParamError(key, key + ": expected a non-negative integer, got '" + text + "'");
  return out;
}

std::size_t parse_count(const std::string& text, const std::string& key) {
  return static_cast<std::size_t>(parse_u64(text, key));
}

// Collected while walking the settings; resolved once everything is read.
struct Pending {
  ThermalMaterial material;
  bool has_material = false;
  bool has_r_h = false;
  bool has_tau_h = false;
};

using Setter = std::function<void(Config&, Pending&, const std::string& value, const std::string& key)>;

Setter number(std::function<void(Config&, double)> f) {
  return [f](Config& c, Pending&, const std::string& v, const std::string& k) { f(c, parse_number(v, k)); };
}

Setter laser_field(bool master, double LaserParams::*field, double scale) {
  return number([=](Config& c, double x) {
    LaserParams& lp = master ? c.system.master : c.system.slave;
    lp.*field = x * scale;
  });
}

Setter material_field(double ThermalMaterial::*field, double scale) {
  return [=](Config&, Pending& p, const std::string& v, const std::string& k) {
    p.material.*field = parse_number(v, k) * scale;
    p.has_material = true;
  };
}

const std::map<std::string, Setter>& key_table() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    for (const bool master : {true, false}) {
      const std::string sec = master ? "master." : "slave.";
      t[sec + "tau_ph_ps"] = laser_field(master, &LaserParams::tau_ph, 1e-12);
      t[sec + "tau_e_ns"] = laser_field(master, &LaserParams::tau_e, 1e-9);
      t[sec + "epsilon"] = laser_field(master, &LaserParams::epsilon, 1.0);
      t[sec + "N_tr"] = laser_field(master, &LaserParams::N_tr, 1.0);
      t[sec + "N_th"] = laser_field(master, &LaserParams::N_th, 1.0);
      t[sec + "C_sp"] = laser_field(master, &LaserParams::C_sp, 1.0);
      t[sec + "Gamma"] = laser_field(master, &LaserParams::Gamma, 1.0);
      t[sec + "alpha"] = laser_field(master, &LaserParams::alpha, 1.0);
      t[sec + "chi_per_W"] = laser_field(master, &LaserParams::chi, 1.0);
      t[sec + "lambda_nm"] = laser_field(master, &LaserParams::lambda, 1e-9);
      t[sec + "V_active_m3"] = number([master](Config& c, double x) {
        (master ? c.system.master : c.system.slave).V_active = x;
      });
    }
    t["coupling.kappa_ex_per_s"] = number([](Config& c, double x) { c.system.coupling.kappa_ex = x; });
    t["coupling.delta_omega_hz"] =
        number([](Config& c, double x) { c.system.coupling.delta_omega = 2.0 * kPi * x; });

    t["thermal.r_h_K_per_W"] = [](Config& c, Pending& p, const std::string& v, const std::string& k) {
      c.system.master_thermal->r_h = parse_number(v, k);
      p.has_r_h = true;
    };
    t["thermal.tau_h_ns"] = [](Config& c, Pending& p, const std::string& v, const std::string& k) {
      c.system.master_thermal->tau_h = parse_number(v, k) * 1e-9;
      p.has_tau_h = true;
    };
    t["thermal.mu_omega_GHz_per_K"] =
        number([](Config& c, double x) { c.system.master_thermal->mu_omega = 2.0 * kPi * x * 1e9; });
    t["thermal.I_b_mA"] = number([](Config& c, double x) { c.system.master_thermal->I_b = x * 1e-3; });
    t["thermal.T0_K"] = number([](Config& c, double x) { c.system.master_thermal->T0 = x; });
    t["thermal.k"] = material_field(&ThermalMaterial::k, 1.0);
    t["thermal.rho"] = material_field(&ThermalMaterial::rho, 1.0);
    t["thermal.C_heat"] = material_field(&ThermalMaterial::C_heat, 1.0);
    t["thermal.l_um"] = material_field(&ThermalMaterial::l, 1e-6);
    t["thermal.L_um"] = material_field(&ThermalMaterial::L_active, 1e-6);
    t["thermal.w_um"] = material_field(&ThermalMaterial::w_active, 1e-6);

    t["drive.I_s_mA"] = number([](Config& c, double x) { c.drive.I_s = x * 1e-3; });
    t["drive.d_ns"] = number([](Config& c, double x) { c.drive.d = x * 1e-9; });
    t["drive.period_ns"] = number([](Config& c, double x) { c.drive.period = x * 1e-9; });
    t["drive.width_ns"] = number([](Config& c, double x) { c.drive.width = x * 1e-9; });
    t["drive.I_low_mA"] = number([](Config& c, double x) { c.drive.I_low = x * 1e-3; });
    t["drive.I_high_mA"] = number([](Config& c, double x) { c.drive.I_high = x * 1e-3; });
    t["drive.t_start_ns"] = number([](Config& c, double x) { c.drive.t_start = x * 1e-9; });
    t["drive.t_on_ns"] = number([](Config& c, double x) { c.drive.t_on = x * 1e-9; });
    t["drive.n_pulses"] = [](Config& c, Pending&, const std::string& v, const std::string& k) {
      c.drive.n_pulses = parse_count(v, k);
    };

    t["sim.dt_ps"] = number([](Config& c, double x) { c.sim.dt = x * 1e-12; });
    t["sim.noise"] = [](Config& c, Pending&, const std::string& v, const std::string& k) {
      c.sim.noise = parse_bool(v, k);
    };
    t["sim.thermal"] = [](Config& c, Pending&, const std::string& v, const std::string& k) {
      c.sim.thermal = parse_bool(v, k);
    };
    t["sim.seed"] = [](Config& c, Pending&, const std::string& v, const std::string& k) {
      c.sim.seed = parse_u64(v, k);
    };
    t["sim.record_stride"] = [](Config& c, Pending&, const std::string& v, const std::string& k) {
      c.sim.record_stride = parse_count(v, k);
    };

    t["study.chi_list"] = [](Config& c, Pending&, const std::string& v, const std::string& k) {
      c.study.chi_list = parse_number_list(v, k);
    };
    t["study.alpha_list"] = [](Config& c, Pending&, const std::string& v, const std::string& k) {
      c.study.alpha_list = parse_number_list(v, k);
    };
    t["study.kappa_list"] = [](Config& c, Pending&, const std::string& v, const std::string& k) {
      c.study.kappa_list = parse_number_list(v, k);
    };
    t["study.n_pairs"] = [](Config& c, Pending&, const std::string& v, const std::string& k) {
      c.study.n_pairs = parse_count(v, k);
    };
    t["study.pairs_per_member"] = [](Config& c, Pending&, const std::string& v, const std::string& k) {
      c.study.pairs_per_member = parse_count(v, k);
    };
    t["study.fringe_points"] = [](Config& c, Pending&, const std::string& v, const std::string& k) {
      c.study.fringe_points = parse_count(v, k);
    };
    t["study.t_end_ns"] = number([](Config& c, double x) { c.study.t_end = x * 1e-9; });
    return t;
  }();
  return table;
}

void require(bool ok, const std::string& key, const std::string& msg) {
  if (!ok) throw ParamError(key, key + ": " + msg);
}

void validate_config(const Config& c) {
  const auto wrap = [](const char* section, auto&& fn) {
    try {
      fn();
    } catch (const ParamError& e) {
      throw ParamError(std::string(section) + "." + e.key(), std::string(section) + "." + e.what());
    }
  };
  wrap("master", [&] { c.system.master.validate(); });
  wrap("slave", [&] { c.system.slave.validate(); });
  wrap("coupling", [&] { c.system.coupling.validate(); });
  wrap("thermal", [&] { c.system.master_thermal->validate(); });

  const auto& d = c.drive;
  require(d.I_s > 0, "drive.I_s_mA", "must be > 0");
  require(d.d > 0, "drive.d_ns", "must be > 0");
  require(d.period > 0, "drive.period_ns", "must be > 0");
  require(d.width > 0 && d.width < d.period, "drive.width_ns", "must lie in (0, period)");
  require(d.d < d.period - d.width, "drive.d_ns", "perturbation must fit inside the inter-pulse gap");
  require(d.I_low >= 0, "drive.I_low_mA", "must be >= 0");
  require(d.I_high >= d.I_low, "drive.I_high_mA", "must be >= I_low");
  require(d.t_start >= 0, "drive.t_start_ns", "must be >= 0");
  require(d.t_on >= 0, "drive.t_on_ns", "must be >= 0");
  require(d.n_pulses >= 3, "drive.n_pulses", "need at least 3 pulses");

  require(c.sim.dt > 0, "sim.dt_ps", "must be > 0");
  require(c.sim.dt <= 0.1 * std::min(c.system.master.tau_ph, c.system.slave.tau_ph) * (1 + 1e-12),
          "sim.dt_ps", "exceeds the stability cap of 0.1 tau_ph");
  require(c.sim.record_stride >= 1, "sim.record_stride", "must be >= 1");

  require(!c.study.chi_list.empty(), "study.chi_list", "must not be empty");
  for (double x : c.study.chi_list) require(x > 0, "study.chi_list", "values must be > 0");
  require(!c.study.alpha_list.empty(), "study.alpha_list", "must not be empty");
  require(!c.study.kappa_list.empty(), "study.kappa_list", "must not be empty");
  for (double x : c.study.kappa_list) require(x >= 0, "study.kappa_list", "values must be >= 0");
  require(c.study.n_pairs >= 1, "study.n_pairs", "must be >= 1");
  require(c.study.pairs_per_member >= 1, "study.pairs_per_member", "must be >= 1");
  require(c.study.fringe_points >= 3, "study.fringe_points", "must be >= 3");
  require(c.study.t_end > d.t_start + 2 * d.period, "study.t_end_ns", "too short for two pulses");
}

}  // namespace

double parse_number(const std::string& text, const std::string& key) {
  const std::string v = trim(text);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
    throw ParamError(key, key + ": expected a number, got '" + text + "'");
  return out;
}

std::vector<double> parse_number_list(const std::string& text, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_number(item, key));
  }
  if (out.empty()) throw ParamError(key, key + ": empty list");
  return out;
}

Settings parse_settings(const std::string& text) {
  // Strip inline comments; the INI reader only knows whole-line ones.
  std::stringstream cleaned;
  std::stringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto cut = line.find_first_of("#;");
    cleaned << trim(cut == std::string::npos ? line : line.substr(0, cut)) << '\n';
  }

  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(cleaned, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ParamError("config", "config: line " + std::to_string(e.line()) + ": " + e.message());
  }

  Settings out;
  for (const auto& [section, body] : tree) {
    if (!body.data().empty())
      throw ParamError(section, section + ": key outside of any [section]");
    static const std::vector<std::string> sections = {"master", "slave", "coupling", "thermal",
                                                      "drive",  "sim",   "study"};
    if (std::find(sections.begin(), sections.end(), section) == sections.end())
      throw ParamError(section, "[" + section + "]: unknown section");
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      if (!is_known_key(full)) throw ParamError(full, full + ": unknown configuration key");
      out[full] = value.get_value<std::string>();
    }
  }
  return out;
}

Settings load_settings_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParamError("config", "config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_settings(ss.str());
}

LaserParams load_params(const std::string& text, const std::string& section) {
  if (section != "master" && section != "slave")
    throw ParamError(section, "[" + section + "]: not a laser section");
  const Settings all = parse_settings(text);
  Settings own;
  for (const auto& [k, v] : all)
    if (k.rfind(section + ".", 0) == 0) own[k] = v;
  for (const char* key : {"tau_ph_ps", "tau_e_ns", "epsilon", "N_tr", "N_th", "C_sp", "Gamma", "alpha",
                          "chi_per_W", "lambda_nm"}) {
    const std::string full = section + "." + key;
    if (!own.count(full)) throw ParamError(full, full + ": missing required key");
  }
  const Config c = build_config(own);
  return section == "master" ? c.system.master : c.system.slave;
}

void apply_override(Settings& s, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ParamError(assignment, "--set " + assignment + ": expected section.key=value");
  const std::string key = trim(assignment.substr(0, eq));
  if (!is_known_key(key)) throw ParamError(key, key + ": unknown configuration key");
  s[key] = trim(assignment.substr(eq + 1));
}

Config build_config(const Settings& s) {
  Config c;
  c.system.master_thermal = ThermalParams{};
  c.study.chi_list = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 14, 16, 18, 20, 25, 30, 35, 40, 45, 50};
  c.study.alpha_list = {3, 4, 5, 6};
  c.study.kappa_list = {0, 1e10, 2e10, 3e10};

  Pending pending;
  for (const auto& [key, value] : s) {
    const auto it = key_table().find(key);
    if (it == key_table().end()) throw ParamError(key, key + ": unknown configuration key");
    it->second(c, pending, value, key);
  }

  auto& th = *c.system.master_thermal;
  if (pending.has_material) {
    const auto k = thermal_constants(pending.material);
    if (!pending.has_r_h) th.r_h = k.r_h;
    if (!pending.has_tau_h) th.tau_h = k.tau_h;
  }
  th.lambda = c.system.master.lambda;
  th.epsilon = c.system.master.epsilon;

  validate_config(c);
  c.settings = s;
  return c;
}

Config default_config() { return build_config({}); }

bool is_known_key(const std::string& key) { return key_table().count(key) != 0; }

std::vector<std::string> known_keys() {
  std::vector<std::string> out;
  for (const auto& [k, v] : key_table()) out.push_back(k);
  return out;
}

}  // namespace injphase
