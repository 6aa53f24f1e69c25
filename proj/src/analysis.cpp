#include "injphase/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "injphase/steady_state.hpp"

namespace injphase {

namespace {

constexpr double kPi = constants::pi;
constexpr double kTwoPi = 2.0 * kPi;

struct IndexRange {
  std::size_t first = 0;
  std::size_t last = 0;  // inclusive
};

// Samples whose time lies inside the gate.
IndexRange gate_samples(const Trajectory& traj, const Gate& g) {
  if (traj.size() == 0 || !(traj.dt > 0.0)) throw ParamError("trajectory", "trajectory is empty");
  const double lo = std::ceil((g.begin - traj.t0) / traj.dt - 1e-9);
  const double hi = std::floor((g.end - traj.t0) / traj.dt + 1e-9);
  if (lo < 0.0 || hi > static_cast<double>(traj.size() - 1) || hi < lo)
    throw ParamError("gate", "gate [" + std::to_string(g.begin) + ", " + std::to_string(g.end) +
                                 "] s is not covered by the trajectory");
  return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

void check_gates(std::span<const Gate> gates) {
  for (std::size_t k = 0; k < gates.size(); ++k) {
    if (!(gates[k].end > gates[k].begin)) throw ParamError("gate", "gate: end must follow begin");
    if (k > 0 && gates[k].begin < gates[k - 1].end)
      throw ParamError("gate", "gates must be ordered and non-overlapping");
  }
}

// Time integral of the master's steady temperature excursion over [a, b).
double integrated_steady_dT(const DriveWaveform& w, const ThermalParams& tp, double a, double b) {
  const auto segs = w.segments();
  double sum = 0.0;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const double lo = std::max(a, i == 0 ? a : segs[i].start);
    const double hi = std::min(b, w.segment_end(i));
    if (hi > lo) sum += (hi - lo) * tp.steady_dT(segs[i].current);
  }
  return sum;
}

}  // namespace

double wrap_phase(double x) {
  const double r = std::remainder(x, kTwoPi);
  return r <= -kPi ? r + kTwoPi : r;
}

std::vector<Gate> default_gates(const PulseTiming& timing, double fraction) {
  if (!(fraction >= 0.0 && fraction < 0.5))
    throw ParamError("gate_fraction", "gate_fraction: must lie in [0, 0.5)");
  std::vector<Gate> out;
  out.reserve(timing.n_pulses);
  for (std::size_t k = 0; k < timing.n_pulses; ++k)
    out.push_back({timing.pulse_begin(k) + fraction * timing.width,
                   timing.pulse_end(k) - fraction * timing.width});
  return out;
}

std::vector<PulseRecord> extract_pulse_phases(const Trajectory& traj, std::span<const Gate> gates) {
  check_gates(gates);
  std::vector<PulseRecord> out;
  out.reserve(gates.size());
  for (std::size_t k = 0; k < gates.size(); ++k) {
    const auto r = gate_samples(traj, gates[k]);
    const double phi_c = traj.slave[(r.first + r.last) / 2].phi;
    double energy = 0.0, t_sum = 0.0, c = 0.0, s = 0.0;
    for (std::size_t i = r.first; i <= r.last; ++i) {
      const double q = std::max(traj.slave[i].Q, 0.0);
      const double rel = traj.slave[i].phi - phi_c;
      energy += q;
      t_sum += q * traj.time(i);
      c += q * std::cos(rel);
      s += q * std::sin(rel);
    }
    PulseRecord rec;
    rec.index = k;
    rec.gate = gates[k];
    rec.energy = energy * traj.dt;
    rec.centroid = energy > 0.0 ? t_sum / energy : 0.5 * (gates[k].begin + gates[k].end);
    rec.unwrapped = phi_c + (energy > 0.0 ? std::atan2(s, c) : 0.0);
    rec.phase = wrap_phase(rec.unwrapped);
    out.push_back(rec);
  }

  if (!out.empty()) {
    std::vector<double> e;
    for (const auto& r : out) e.push_back(r.energy);
    std::nth_element(e.begin(), e.begin() + e.size() / 2, e.end());
    const double median = e[e.size() / 2];
    for (auto& r : out) r.no_pulse = r.energy < 1e-3 * median || r.energy <= 0.0;
  }
  return out;
}

std::vector<double> pair_phase_differences(std::span<const PulseRecord> pulses, double bias) {
  std::vector<double> out;
  for (std::size_t j = 0; j + 1 < pulses.size(); ++j)
    out.push_back(wrap_phase(pulses[j + 1].unwrapped - pulses[j].unwrapped - bias));
  return out;
}

InterferenceTrace interfere_delayed(const Trajectory& traj, double delay, double bias,
                                    std::span<const Gate> gates) {
  if (!(traj.dt > 0.0)) throw ParamError("trajectory", "trajectory is empty");
  const double steps = delay / traj.dt;
  const auto L = static_cast<std::size_t>(std::llround(steps));
  if (L == 0 || std::abs(steps - static_cast<double>(L)) > 1e-6 * std::max(1.0, steps))
    throw ParamError("delay", "delay: must be a positive multiple of the sample spacing");
  if (traj.size() <= L) throw ParamError("delay", "delay: trajectory shorter than the delay");
  check_gates(gates);

  const auto field = [&](std::size_t i) {
    const auto& now = traj.slave[i];
    const auto& old = traj.slave[i - L];
    const double q1 = std::max(now.Q, 0.0);
    const double q2 = std::max(old.Q, 0.0);
    const double mixed = std::sqrt(q1 * q2);
    const double dphi = now.phi - old.phi - bias;
    return std::array<double, 5>{q1, q2, mixed, std::cos(dphi), std::sin(dphi)};
  };

  InterferenceTrace out;
  out.t0 = traj.time(L);
  out.dt = traj.dt;
  out.intensity.reserve(traj.size() - L);
  for (std::size_t i = L; i < traj.size(); ++i) {
    const auto f = field(i);
    out.intensity.push_back(std::max(0.0, 0.25 * (f[0] + f[1] + 2.0 * f[2] * f[3])));
  }

  for (std::size_t k = 0; k < gates.size(); ++k) {
    IndexRange r;
    try {
      r = gate_samples(traj, gates[k]);
    } catch (const ParamError&) {
      continue;
    }
    if (r.first < L) continue;
    double energy = 0.0, c = 0.0, s = 0.0, total = 0.0;
    for (std::size_t i = r.first; i <= r.last; ++i) {
      const auto f = field(i);
      energy += out.intensity[i - L];
      c += f[2] * f[3];
      s += f[2] * f[4];
      total += 0.5 * (f[0] + f[1]);
    }
    out.pairs.push_back({k, energy * traj.dt, total > 0.0 ? std::hypot(c, s) / total : 0.0,
                         wrap_phase(std::atan2(s, c))});
  }
  return out;
}

ErrorRate wilson_interval(std::size_t errors, std::size_t n) {
  if (n == 0) throw ParamError("ensemble", "ensemble: no pairs to classify");
  if (errors > n) throw ParamError("errors", "errors: more errors than pairs");
  constexpr double z = 1.959963984540054;
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(errors) / nn;
  const double denom = 1.0 + z * z / nn;
  const double centre = (p + z * z / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / denom;
  return {n, errors, p, std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

ErrorRate coding_error_rate(std::span<const double> delta_phi, std::span<const int> bits) {
  if (delta_phi.size() != bits.size())
    throw ParamError("bits", "bits: one intended bit per pair is required");
  std::size_t errors = 0;
  for (std::size_t j = 0; j < bits.size(); ++j) {
    if (bits[j] != 0 && bits[j] != 1) throw ParamError("bits", "bits: must be 0 or 1");
    const int decoded = std::cos(delta_phi[j]) < 0.0 ? 1 : 0;
    errors += decoded != bits[j];
  }
  return wilson_interval(errors, bits.size());
}

double kolmogorov_sf(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 1.0) {
    // Small-x form of the same distribution (Jacobi theta transformation).
    double sum = 0.0;
    for (int k = 1; k <= 50; ++k) {
      const double term = std::exp(-(2 * k - 1) * (2 * k - 1) * kPi * kPi / (8.0 * x * x));
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return std::clamp(1.0 - std::sqrt(kTwoPi) / x * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_uniform(std::span<const double> x, double lo, double hi) {
  if (x.empty()) throw ParamError("sample", "sample: empty");
  if (!(hi > lo)) throw ParamError("range", "range: hi must exceed lo");
  std::vector<double> u(x.begin(), x.end());
  for (auto& v : u) v = std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
  std::sort(u.begin(), u.end());
  const double n = static_cast<double>(u.size());
  double D = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double above = static_cast<double>(i + 1) / n - u[i];
    const double below = u[i] - static_cast<double>(i) / n;
    D = std::max({D, above, below});
  }
  const double sn = std::sqrt(n);
  return {D, kolmogorov_sf((sn + 0.12 + 0.11 / sn) * D)};
}

CosineFit fit_cosine(std::span<const double> phase, std::span<const double> y) {
  if (phase.size() != y.size() || phase.size() < 2)
    throw ParamError("fit", "fit: need at least two (phase, value) points");
  double n = 0, sc = 0, scc = 0, sy = 0, scy = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double c = std::cos(phase[i]);
    n += 1;
    sc += c;
    scc += c * c;
    sy += y[i];
    scy += c * y[i];
  }
  const double det = n * scc - sc * sc;
  if (std::abs(det) < 1e-12 * n * n) throw DomainError("fit: phases do not vary");
  CosineFit fit;
  fit.amplitude = (n * scy - sc * sy) / det;
  fit.offset = (sy - fit.amplitude * sc) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = y[i] - fit.offset - fit.amplitude * std::cos(phase[i]);
    ss += r * r;
  }
  fit.rms = std::sqrt(ss / n);
  return fit;
}

double CodingSetup::interferometer_bias() const {
  const double w = solve_operating_point(system.master, I_s).omega_shift;
  return (w + system.coupling.delta_omega) * period;
}

PulseTrainRun run_pulse_train(const CodingSetup& setup, std::span<const double> amplitudes) {
  const std::size_t n = amplitudes.size() + 1;
  PulseTrainRun out;
  out.slave_drive = build_slave_drive(setup.period, setup.width, setup.I_low, setup.I_high, n,
                                      setup.t_start);
  std::vector<std::pair<std::size_t, double>> pert;
  for (std::size_t j = 0; j < amplitudes.size(); ++j) pert.emplace_back(j, amplitudes[j]);
  out.master_drive = build_master_drive(setup.I_s, pert, setup.d, out.slave_drive.timing());
  if (setup.master_on) out.master_drive = switch_on(out.master_drive, 0.0, *setup.master_on);

  SimOptions opts = setup.sim;
  const double t_end = setup.t_start + static_cast<double>(n) * setup.period;
  opts.t_end = static_cast<double>(std::llround(t_end / opts.dt)) * opts.dt;
  out.traj = simulate(setup.system, out.master_drive, out.slave_drive, opts);

  const auto gates = default_gates(out.slave_drive.timing(), setup.gate_fraction);
  out.pulses = extract_pulse_phases(out.traj, gates);
  out.delta_phi = pair_phase_differences(out.pulses, setup.interferometer_bias());
  return out;
}

double setup_R(const CodingSetup& setup) {
  if (setup.system.coupling.kappa_ex == 0.0) return 0.0;
  CodingSetup quiet = setup;
  quiet.sim.noise = false;
  quiet.sim.thermal = false;
  quiet.master_on.reset();
  const std::vector<double> amplitudes(3, 0.0);
  const auto run = run_pulse_train(quiet, amplitudes);
  return compute_R(run.traj, setup.system.slave, setup.system.coupling, setup.period);
}

FringeScan fringe_scan(const CodingSetup& setup, std::span<const double> ramp) {
  if (ramp.size() < 2) throw ParamError("ramp", "ramp: need at least two values");
  if (!std::is_sorted(ramp.begin(), ramp.end())) throw ParamError("ramp", "ramp: must be sorted");

  std::vector<double> amplitudes{0.0};
  amplitudes.insert(amplitudes.end(), ramp.begin(), ramp.end());
  FringeScan out;
  out.run = run_pulse_train(setup, amplitudes);

  const auto gates = default_gates(out.run.slave_drive.timing(), setup.gate_fraction);
  const auto trace = interfere_delayed(out.run.traj, setup.period, setup.interferometer_bias(), gates);
  std::vector<double> energy(gates.size(), 0.0);
  for (const auto& p : trace.pairs) energy[p.index] = p.energy;

  // Ramp value r drives gap r + 1, i.e. the pair (r + 1, r + 2).
  std::vector<double> wrapped(ramp.size());
  for (std::size_t r = 0; r < ramp.size(); ++r) wrapped[r] = out.run.delta_phi[r + 1];

  std::size_t anchor = 0;
  for (std::size_t r = 1; r < ramp.size(); ++r)
    if (std::abs(ramp[r]) < std::abs(ramp[anchor])) anchor = r;
  std::vector<double> unwrapped(ramp.size());
  unwrapped[anchor] = wrapped[anchor];
  const auto follow = [&](std::size_t to, std::size_t from) {
    unwrapped[to] = unwrapped[from] + wrap_phase(wrapped[to] - unwrapped[from]);
  };
  for (std::size_t r = anchor + 1; r < ramp.size(); ++r) follow(r, r - 1);
  for (std::size_t r = anchor; r-- > 0;) follow(r, r + 1);

  std::vector<double> e;
  for (std::size_t r = 0; r < ramp.size(); ++r) {
    out.rows.push_back({ramp[r], energy[r + 2], unwrapped[r]});
    e.push_back(energy[r + 2]);
  }
  out.fit = fit_cosine(unwrapped, e);
  return out;
}

double TurnOnDrift::max_relative_deviation(double t_on, double t_after) const {
  double worst = -1.0;
  for (const auto& r : rows)
    if (r.t_mid - t_on > t_after)
      worst = std::max(worst, std::abs(wrap_phase(r.drift - asymptote)) / std::abs(asymptote));
  if (worst < 0.0) throw ParamError("t_after", "t_after: no pairs late enough");
  return worst;
}

TurnOnDrift turn_on_drift(const CodingSetup& setup, std::span<const double> amplitudes) {
  if (!setup.system.master_thermal)
    throw ParamError("thermal", "thermal: turn-on study needs master thermal parameters");
  if (amplitudes.size() < 2) throw ParamError("n_pulses", "n_pulses: need at least three pulses");
  CodingSetup hot = setup;
  hot.sim.thermal = true;
  CodingSetup cold = setup;
  cold.sim.thermal = false;

  TurnOnDrift out;
  out.hot = run_pulse_train(hot, amplitudes);
  out.cold = run_pulse_train(cold, amplitudes);

  const double bias = setup.interferometer_bias();
  for (std::size_t j = 0; j + 1 < out.hot.pulses.size(); ++j) {
    const auto& h0 = out.hot.pulses[j];
    const auto& h1 = out.hot.pulses[j + 1];
    const auto& c0 = out.cold.pulses[j];
    const auto& c1 = out.cold.pulses[j + 1];
    DriftRow row;
    row.pair = j;
    row.t_mid = 0.5 * (h0.centroid + h1.centroid);
    row.hot = wrap_phase(h1.unwrapped - h0.unwrapped - bias);
    row.cold = wrap_phase(c1.unwrapped - c0.unwrapped - bias);
    row.drift = (h1.unwrapped - h0.unwrapped) - (c1.unwrapped - c0.unwrapped);
    out.rows.push_back(row);
  }

  // Steady heating averaged over the last perturbed period.
  const auto& timing = out.hot.slave_drive.timing();
  const std::size_t last_gap = amplitudes.size() - 1;
  const double a = timing.pulse_begin(last_gap);
  const double b = a + timing.period;
  const auto& tp = *setup.system.master_thermal;
  out.asymptote = -tp.mu_omega * integrated_steady_dT(out.hot.master_drive, tp, a, b);
  return out;
}

}  // namespace injphase
