#pragma once

// INI-style run configuration.
//
//   [master] / [slave]  tau_ph_ps tau_e_ns epsilon N_tr N_th C_sp Gamma alpha
//                       chi_per_W lambda_nm V_active_m3
//   [coupling]          kappa_ex_per_s delta_omega_hz (= detuning / 2 pi)
//   [thermal]           r_h_K_per_W tau_h_ns mu_omega_GHz_per_K I_b_mA T0_K
//                       or the material keys k rho C_heat l_um L_um w_um
//   [drive]             I_s_mA d_ns period_ns width_ns I_low_mA I_high_mA
//                       t_start_ns t_on_ns n_pulses
//   [sim]               dt_ps noise thermal seed record_stride
//   [study]             chi_list alpha_list kappa_list n_pairs pairs_per_member
//                       fringe_points t_end_ns
//
// '#' and ';' start comments. Keys are addressed as "section.key" by the
// --set overrides and by sweeps. Unknown sections or keys are rejected.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "injphase/simulator.hpp"

namespace injphase {

/// Flat "section.key" -> raw value map, in file order independent form.
using Settings = std::map<std::string, std::string>;

struct DriveConfig {
  double I_s = 30e-3;       // master bias [A]
  double d = 0.1e-9;        // perturbation length [s]
  double period = 2.5e-9;   // slave repetition period [s]
  double width = 1.0e-9;    // slave pulse width [s]
  double I_low = 8e-3;      // slave bias [A]
  double I_high = 50e-3;    // slave pulse current [A]
  double t_start = 2e-9;    // first slave pulse [s]
  double t_on = 1e-9;       // master switch-on time in the turn-on study [s]
  std::size_t n_pulses = 12;
};

struct SimConfig {
  double dt = 0.05e-12;
  bool noise = false;
  bool thermal = false;
  std::uint64_t seed = 1;
  std::size_t record_stride = 20;
};

struct StudyConfig {
  std::vector<double> chi_list;    // [1/W]
  std::vector<double> alpha_list;
  std::vector<double> kappa_list;  // [1/s]
  std::size_t n_pairs = 1000;
  std::size_t pairs_per_member = 100;
  std::size_t fringe_points = 21;
  double t_end = 100e-9;           // turn-on study length [s]
};

struct Config {
  SystemParams system;  // master_thermal always set
  DriveConfig drive;
  SimConfig sim;
  StudyConfig study;
  Settings settings;    // effective settings the config was built from
};

/// Parses INI text. Throws ParamError on syntax errors.
Settings parse_settings(const std::string& text);
Settings load_settings_file(const std::string& path);

/// Reads one laser section ([master] or [slave]) in which every key except
/// V_active_m3 is mandatory. Other sections in `text` are parsed but ignored.
LaserParams load_params(const std::string& text, const std::string& section = "master");

/// Applies "section.key=value". Throws ParamError for unknown keys or a
/// missing '='.
void apply_override(Settings& s, const std::string& assignment);

/// Builds and validates a configuration. Keys absent from `s` keep their
/// defaults. Throws ParamError naming the offending key.
Config build_config(const Settings& s);

Config default_config();

bool is_known_key(const std::string& key);
std::vector<std::string> known_keys();

/// Parses a comma-separated list of numbers.
std::vector<double> parse_number_list(const std::string& text, const std::string& key);
double parse_number(const std::string& text, const std::string& key);

}  // namespace injphase
