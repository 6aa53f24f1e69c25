#include "injphase/scenarios.hpp"

#include <cmath>
#include <algorithm>
#include <cstdio>
#include <limits>

#include "injphase/parallel.hpp"
#include "injphase/rng.hpp"
#include "injphase/steady_state.hpp"
#include "injphase/thermal.hpp"

namespace injphase {

namespace {

constexpr double kPi = constants::pi;

std::string fmt(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

double dipi(const CodingSetup& s) { return delta_I_pi(s.system.master, s.I_s, s.d); }

std::vector<double> alternating(std::size_t gaps, double amplitude) {
  std::vector<double> a(gaps, 0.0);
  for (std::size_t j = 1; j < gaps; ++j) a[j] = (j % 2) ? amplitude : 0.0;
  return a;
}

Table trace_table(const Trajectory& tr, double t_max = std::numeric_limits<double>::infinity()) {
  Table t{"trace",
          {"t_ns", "I_M_mA", "I_S_mA", "Q_M", "Q_S", "phi_M_rad", "phi_S_rad", "N_M", "N_S", "dT_M_K"},
          {}};
  for (std::size_t i = 0; i < tr.size() && tr.time(i) <= t_max; ++i) {
    const auto& m = tr.master[i];
    const auto& s = tr.slave[i];
    t.rows.push_back({tr.time(i) * 1e9, tr.I_M[i] * 1e3, tr.I_S[i] * 1e3, m.Q, s.Q, m.phi, s.phi, m.N,
                      s.N, m.dT});
  }
  return t;
}

// Pairs j >= 1 (pair 0 involves the priming pulse).
Table pairs_table(const PulseTrainRun& run, std::span<const double> amplitudes) {
  Table t{"pairs", {"pair", "t_ns", "delta_I_mA", "delta_phi_rad", "energy_first", "energy_second"}, {}};
  for (std::size_t j = 1; j < run.delta_phi.size(); ++j) {
    const auto& a = run.pulses[j];
    const auto& b = run.pulses[j + 1];
    t.rows.push_back({static_cast<double>(j), 0.5 * (a.centroid + b.centroid) * 1e9,
                      amplitudes[j] * 1e3, run.delta_phi[j], a.energy, b.energy});
  }
  return t;
}

Table error_rate_table() {
  return {"error_rate", {"kappa_ex_per_s", "R", "n_pairs", "errors", "rate", "ci_low", "ci_high"}, {},
          true};
}

void add_rate_row(Table& t, const RateCell& c) {
  t.rows.push_back({c.kappa, c.R, static_cast<double>(c.rate.n), static_cast<double>(c.rate.errors),
                    c.rate.rate, c.rate.ci_low, c.rate.ci_high});
}

ScenarioResult scenario_steady(const Config& cfg) {
  const auto& p = cfg.system.master;
  const double I_th = threshold_current(p);
  std::vector<double> currents{cfg.drive.I_s};
  for (int k = 0; k <= 19; ++k) currents.push_back(I_th * (1.1 + 1.9 * k / 19.0));
  std::sort(currents.begin(), currents.end());
  currents.erase(std::unique(currents.begin(), currents.end()), currents.end());

  Table t{"steady",
          {"I_mA", "N_s", "Q_s", "omega_shift_GHz", "power_mW", "N_s_approx", "Q_s_approx",
           "residual_carrier", "residual_photon"},
          {},
          true};
  for (double I : currents) {
    const auto s = solve_operating_point(p, I);
    const auto a = approx_operating_point(p, I);
    const auto r = steady_residuals(p, I, s);
    t.rows.push_back({I * 1e3, s.N_s, s.Q_s, s.omega_shift / (2 * kPi) * 1e-9,
                      photon_to_power(s.Q_s, p) * 1e3, a.N_s, a.Q_s, r.carrier, r.photon});
  }
  const auto s = solve_operating_point(p, cfg.drive.I_s);
  return {{t},
          {"master at " + fmt(cfg.drive.I_s * 1e3) + " mA: N_s = " + fmt(s.N_s, 6) +
           ", Q_s = " + fmt(s.Q_s, 6) + ", shift = " + fmt(s.omega_shift / (2 * kPi) * 1e-9) +
           " GHz (I_th = " + fmt(I_th * 1e3) + " mA)"}};
}

ScenarioResult scenario_dipi(const Config& cfg) {
  const auto& p = cfg.system.master;
  const double I_s = cfg.drive.I_s, d = cfg.drive.d;
  const double num = delta_I_pi(p, I_s, d, DipiMethod::numerical);
  const double first = delta_I_pi(p, I_s, d, DipiMethod::first_order);
  const double simple = delta_I_pi(p, I_s, d, DipiMethod::simple);
  Table t{"dipi",
          {"I_s_mA", "d_ns", "dIpi_numerical_mA", "dIpi_first_order_mA", "dIpi_simple_mA",
           "spontaneous_scale_W"},
          {{I_s * 1e3, d * 1e9, num * 1e3, first * 1e3, simple * 1e3, spontaneous_scale_estimate(p, d)}},
          true};
  return {{t},
          {"delta I_pi: numerical " + fmt(num * 1e3) + " mA, first-order " + fmt(first * 1e3) +
           " mA, simple " + fmt(simple * 1e3) + " mA"}};
}

ScenarioResult scenario_fig2(const Config& cfg) {
  const auto rows = sweep_delta_I_pi(cfg.system.master, cfg.study.chi_list, cfg.study.alpha_list,
                                     cfg.drive.I_s, cfg.drive.d);
  Table t{"fig2", {"chi_per_W", "alpha", "dIpi_numerical_mA", "dIpi_simple_mA"}, {}, true};
  for (const auto& r : rows) t.rows.push_back({r.chi, r.alpha, r.numerical * 1e3, r.simple * 1e3});
  return {{t}, {"delta I_pi over " + std::to_string(rows.size()) + " (chi, alpha) points"}};
}

ScenarioResult scenario_fig3(const Config& cfg) {
  CodingSetup s = coding_setup(cfg);
  const double a = dipi(s);
  const auto amplitudes = alternating(cfg.drive.n_pulses - 1, a);
  const auto run = run_pulse_train(s, amplitudes);
  const auto trace = interfere_delayed(run.traj, s.period, s.interferometer_bias());

  Table inter{"interference", {"t_ns", "Q_int"}, {}};
  for (std::size_t i = 0; i < trace.intensity.size(); ++i)
    inter.rows.push_back({trace.time(i) * 1e9, trace.intensity[i]});

  std::vector<double> ramp(cfg.study.fringe_points);
  for (std::size_t i = 0; i < ramp.size(); ++i)
    ramp[i] = -a + 2.0 * a * static_cast<double>(i) / static_cast<double>(ramp.size() - 1);
  const auto fringe = fringe_scan(s, ramp);
  Table fr{"fringe", {"dI_mA", "pair_energy", "delta_phi_rad"}, {}};
  for (const auto& r : fringe.rows) fr.rows.push_back({r.dI * 1e3, r.pair_energy, r.delta_phi});

  return {{trace_table(run.traj), inter, pairs_table(run, amplitudes), fr},
          {"delta I_pi = " + fmt(a * 1e3) + " mA; fringe spans " + fmt(fringe.rows.front().delta_phi) +
           " .. " + fmt(fringe.rows.back().delta_phi) + " rad, cosine-fit residual " +
           fmt(fringe.fit.rms / std::abs(fringe.fit.amplitude)) + " of amplitude"}};
}

ScenarioResult scenario_fig4(const Config& cfg) {
  CodingSetup s = coding_setup(cfg);
  s.master_on = cfg.drive.t_on;
  const double a = dipi(s);
  const auto n = static_cast<std::size_t>(
      std::floor((cfg.study.t_end - cfg.drive.t_start) / cfg.drive.period + 1e-9));
  const std::vector<double> amplitudes(n - 1, a);
  const auto drift = turn_on_drift(s, amplitudes);

  const auto hot = interfere_delayed(drift.hot.traj, s.period, s.interferometer_bias());
  const auto cold = interfere_delayed(drift.cold.traj, s.period, s.interferometer_bias());
  Table inter{"interference", {"t_ns", "Q_int_thermal", "Q_int_no_thermal"}, {}};
  for (std::size_t i = 0; i < hot.intensity.size(); ++i)
    inter.rows.push_back({hot.time(i) * 1e9, hot.intensity[i], cold.intensity[i]});

  Table dr{"drift",
           {"pair", "t_ns", "delta_phi_thermal_rad", "delta_phi_no_thermal_rad", "drift_rad",
            "asymptote_rad"},
           {},
           true};
  for (const auto& r : drift.rows)
    dr.rows.push_back({static_cast<double>(r.pair), r.t_mid * 1e9, r.hot, r.cold, r.drift,
                       drift.asymptote});

  const double tau_h = cfg.system.master_thermal->tau_h;
  std::string note = "asymptotic drift per pair " + fmt(drift.asymptote) + " rad";
  if (cfg.drive.t_on + 4 * tau_h < drift.rows.back().t_mid)
    note += "; max deviation after 4 tau_h " +
            fmt(100 * drift.max_relative_deviation(cfg.drive.t_on, 4 * tau_h)) + "%";
  return {{trace_table(drift.hot.traj), inter, dr}, {note}};
}

ScenarioResult scenario_thermal(const Config& cfg) {
  const auto& tp = *cfg.system.master_thermal;
  Table slab{"slab", {"p", "y_exact", "f_fit", "abs_diff"}, {}};
  for (int k = 0; k <= 60; ++k) {
    const double p = 0.01 * std::pow(1000.0, k / 60.0);
    const double y = y_exact(p), f = f_fit(p);
    slab.rows.push_back({p, y, f, std::abs(y - f)});
  }

  const double t_end = cfg.study.t_end;
  const auto drive = switch_on(DriveWaveform::constant(cfg.drive.I_s), tp.I_b, cfg.drive.t_on);
  const TimeGrid grid{0.0, 0.1e-9, static_cast<std::size_t>(std::llround(t_end / 0.1e-9)) + 1};
  const auto dT = integrate_dT(drive, tp, grid);
  const double dT_inf = tp.steady_dT(cfg.drive.I_s);
  Table step{"step", {"t_ns", "dT_K", "dT_fraction"}, {}};
  for (std::size_t i = 0; i < grid.n; ++i)
    step.rows.push_back({grid.at(i) * 1e9, dT[i], dT_inf != 0.0 ? dT[i] / dT_inf : 0.0});

  Table k{"constants",
          {"r_h_K_per_W", "tau_h_ns", "mu_omega_GHz_per_K", "I_s_mA", "dT_inf_K", "phase_rate_GHz"},
          {{tp.r_h, tp.tau_h * 1e9, tp.mu_omega / (2 * kPi) * 1e-9, cfg.drive.I_s * 1e3, dT_inf,
            phase_rate_correction(dT_inf, tp) / (2 * kPi) * 1e-9}},
          true};
  return {{slab, step, k},
          {"steady excursion " + fmt(dT_inf) + " K, frequency shift " +
           fmt(phase_rate_correction(dT_inf, tp) / (2 * kPi) * 1e-9) + " GHz"}};
}

ScenarioResult scenario_custom(const Config& cfg) {
  CodingSetup s = coding_setup(cfg);
  const auto amplitudes = alternating(cfg.drive.n_pulses - 1, dipi(s));
  const auto run = run_pulse_train(s, amplitudes);
  const auto trace = interfere_delayed(run.traj, s.period, s.interferometer_bias());
  Table inter{"interference", {"t_ns", "Q_int"}, {}};
  for (std::size_t i = 0; i < trace.intensity.size(); ++i)
    inter.rows.push_back({trace.time(i) * 1e9, trace.intensity[i]});

  std::vector<double> dphi(run.delta_phi.begin() + 1, run.delta_phi.end());
  std::vector<int> bits;
  for (std::size_t j = 1; j < run.delta_phi.size(); ++j) bits.push_back(static_cast<int>(j % 2));
  RateCell cell{s.system.coupling.kappa_ex, setup_R(s), coding_error_rate(dphi, bits), dphi, bits};
  Table rate = error_rate_table();
  add_rate_row(rate, cell);
  return {{trace_table(run.traj), inter, pairs_table(run, amplitudes), rate},
          {"R = " + fmt(cell.R) + ", errors " + std::to_string(cell.rate.errors) + "/" +
           std::to_string(cell.rate.n)}};
}

Table rate_pairs_table() {
  return {"pairs", {"kappa_ex_per_s", "pair", "bit", "delta_phi_rad"}, {}};
}

void add_pair_rows(Table& t, const RateCell& c) {
  for (std::size_t j = 0; j < c.delta_phi.size(); ++j)
    t.rows.push_back({c.kappa, static_cast<double>(j), static_cast<double>(c.bits[j]), c.delta_phi[j]});
}

std::string rate_note(const RateCell& c) {
  return "kappa_ex = " + fmt(c.kappa) + " 1/s: R = " + fmt(c.R) + ", error rate " + fmt(c.rate.rate) +
         " [" + fmt(c.rate.ci_low) + ", " + fmt(c.rate.ci_high) + "] on " + std::to_string(c.rate.n) +
         " pairs";
}

ScenarioResult scenario_rate(const Config& cfg, const RunOptions& opts) {
  const auto cell = run_rate_cell(coding_setup(cfg), cfg.study.n_pairs, cfg.study.pairs_per_member,
                                  opts.stream_base, opts.workers);
  Table rate = error_rate_table();
  add_rate_row(rate, cell);
  Table pairs = rate_pairs_table();
  add_pair_rows(pairs, cell);
  return {{rate, pairs}, {rate_note(cell)}};
}

ScenarioResult scenario_fig5(const Config& cfg, const RunOptions& opts) {
  ScenarioResult out;
  Table rate = error_rate_table();
  Table pairs = rate_pairs_table();
  const auto& kappas = cfg.study.kappa_list;
  for (std::size_t c = 0; c < kappas.size(); ++c) {
    CodingSetup s = coding_setup(cfg);
    s.system.coupling.kappa_ex = kappas[c];
    const auto cell = run_rate_cell(s, cfg.study.n_pairs, cfg.study.pairs_per_member,
                                    derive_stream(opts.stream_base, c), opts.workers);
    add_rate_row(rate, cell);
    add_pair_rows(pairs, cell);
    out.notes.push_back(rate_note(cell));
  }

  // Intensity snapshot: ten pulses at the strongest coupling.
  CodingSetup s = coding_setup(cfg);
  s.system.coupling.kappa_ex = *std::max_element(kappas.begin(), kappas.end());
  s.sim.noise = true;
  s.sim.stream = derive_stream(opts.stream_base, kappas.size());
  const auto run = run_pulse_train(s, alternating(9, dipi(s)));
  out.tables = {rate, pairs, trace_table(run.traj)};
  return out;
}

}  // namespace

CodingSetup coding_setup(const Config& cfg) {
  CodingSetup s;
  s.system = cfg.system;
  s.I_s = cfg.drive.I_s;
  s.d = cfg.drive.d;
  s.period = cfg.drive.period;
  s.width = cfg.drive.width;
  s.I_low = cfg.drive.I_low;
  s.I_high = cfg.drive.I_high;
  s.t_start = cfg.drive.t_start;
  s.sim.dt = cfg.sim.dt;
  s.sim.noise = cfg.sim.noise;
  s.sim.thermal = cfg.sim.thermal;
  s.sim.seed = cfg.sim.seed;
  s.sim.record_stride = cfg.sim.record_stride;
  return s;
}

RateCell run_rate_cell(const CodingSetup& setup, std::size_t n_pairs, std::size_t pairs_per_member,
                       std::uint64_t stream_base, std::size_t workers) {
  if (n_pairs == 0) throw ParamError("n_pairs", "n_pairs: must be >= 1");
  if (pairs_per_member == 0) throw ParamError("pairs_per_member", "pairs_per_member: must be >= 1");
  const double a = dipi(setup);
  const std::size_t members = (n_pairs + pairs_per_member - 1) / pairs_per_member;

  std::vector<std::vector<double>> dphi(members);
  parallel_for(members, workers, [&](std::size_t m) {
    const std::size_t pairs = std::min(pairs_per_member, n_pairs - m * pairs_per_member);
    CodingSetup s = setup;
    s.sim.noise = true;
    s.sim.stream = derive_stream(stream_base, m);
    const auto run = run_pulse_train(s, alternating(pairs + 1, a));
    dphi[m].assign(run.delta_phi.begin() + 1, run.delta_phi.end());
  });

  RateCell cell;
  cell.kappa = setup.system.coupling.kappa_ex;
  for (const auto& v : dphi)
    for (std::size_t j = 0; j < v.size(); ++j) {
      cell.delta_phi.push_back(v[j]);
      cell.bits.push_back(static_cast<int>((j + 1) % 2));
    }
  cell.rate = coding_error_rate(cell.delta_phi, cell.bits);
  cell.R = setup_R(setup);
  return cell;
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"steady", "dipi",    "fig2",   "fig3", "fig4",
                                                 "fig5",   "thermal", "custom", "rate"};
  return names;
}

ScenarioResult run_scenario(const std::string& name, const Config& cfg, const RunOptions& opts) {
  if (name == "steady") return scenario_steady(cfg);
  if (name == "dipi") return scenario_dipi(cfg);
  if (name == "fig2") return scenario_fig2(cfg);
  if (name == "fig3") return scenario_fig3(cfg);
  if (name == "fig4") return scenario_fig4(cfg);
  if (name == "fig5") return scenario_fig5(cfg, opts);
  if (name == "thermal") return scenario_thermal(cfg);
  if (name == "custom") return scenario_custom(cfg);
  if (name == "rate") return scenario_rate(cfg, opts);
  throw ParamError("scenario", "scenario: unknown name '" + name + "'");
}

ScenarioResult run_sweep(const std::string& scenario, const std::string& axis,
                         const std::vector<std::string>& values, const Settings& base,
                         const RunOptions& opts) {
  if (!is_known_key(axis)) throw ParamError(axis, axis + ": unknown configuration key");
  if (values.empty()) throw ParamError("values", "values: sweep needs at least one value");

  ScenarioResult out;
  for (std::size_t c = 0; c < values.size(); ++c) {
    const double tag = parse_number(values[c], axis);
    Settings s = base;
    s[axis] = values[c];
    const Config cfg = build_config(s);
    RunOptions cell_opts = opts;
    // Cell 0 keeps the base stream so a one-value sweep matches a plain run.
    cell_opts.stream_base = c == 0 ? opts.stream_base : derive_stream(opts.stream_base, 0x1000 + c);
    const auto r = run_scenario(scenario, cfg, cell_opts);

    for (const auto& t : r.tables) {
      if (!t.summary) continue;
      auto it = std::find_if(out.tables.begin(), out.tables.end(),
                             [&](const Table& x) { return x.name == t.name; });
      if (it == out.tables.end()) {
        Table agg{t.name, {axis}, {}, true};
        agg.columns.insert(agg.columns.end(), t.columns.begin(), t.columns.end());
        out.tables.push_back(agg);
        it = out.tables.end() - 1;
      }
      for (const auto& row : t.rows) {
        std::vector<double> tagged{tag};
        tagged.insert(tagged.end(), row.begin(), row.end());
        it->rows.push_back(std::move(tagged));
      }
    }
    for (const auto& n : r.notes) out.notes.push_back(axis + "=" + values[c] + ": " + n);
  }
  return out;
}

}  // namespace injphase
