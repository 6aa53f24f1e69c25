#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "injphase/drive.hpp"
#include "injphase/simulator.hpp"

namespace injphase {

/// Wraps to (-pi, pi].
double wrap_phase(double x);

struct Gate {
  double begin = 0.0;  // [s]
  double end = 0.0;    // [s]
};

/// One gate per slave pulse, trimmed by `fraction` of the pulse width at
/// both edges to skip the turn-on chirp.
std::vector<Gate> default_gates(const PulseTiming& timing, double fraction = 0.2);

struct PulseRecord {
  std::size_t index = 0;
  Gate gate;
  double energy = 0.0;     // sum of Q dt over the gate [photon s]
  double centroid = 0.0;   // energy-weighted mean time [s]
  double phase = 0.0;      // energy-weighted circular mean of phi, wrapped
  double unwrapped = 0.0;  // same angle placed next to phi at the gate centre
  bool no_pulse = false;   // energy below 1e-3 of the median pulse energy
};

/// Slave pulse phases over the given gates (ordered, non-overlapping, inside
/// the record).
std::vector<PulseRecord> extract_pulse_phases(const Trajectory& traj, std::span<const Gate> gates);

/// Delta Phi_j = wrap(phase_{j+1} - phase_j - bias) for consecutive pulses.
/// `bias` is the interferometer's own phase over one delay.
std::vector<double> pair_phase_differences(std::span<const PulseRecord> pulses, double bias = 0.0);

struct InterferencePair {
  std::size_t index = 0;    // later pulse of the pair
  double energy = 0.0;      // interfered energy over its gate
  double visibility = 0.0;  // |sum sqrt(Q1 Q2) e^{i dphi}| / sum (Q1 + Q2) / 2
  double delta_phi = 0.0;   // wrapped
};

struct InterferenceTrace {
  double t0 = 0.0;  // first sample time (record start + delay)
  double dt = 0.0;
  std::vector<double> intensity;
  std::vector<InterferencePair> pairs;

  double time(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
};

/// Slave field through an ideal delayed interferometer (50/50 splits, delay
/// equal to the modulation period):
///   Q_int(t) = 1/4 [Q(t) + Q(t-T) + 2 sqrt(Q(t) Q(t-T)) cos(phi(t) - phi(t-T) - bias)].
/// Pair statistics are filled for every gate whose delayed copy is on record.
InterferenceTrace interfere_delayed(const Trajectory& traj, double delay, double bias = 0.0,
                                    std::span<const Gate> gates = {});

struct ErrorRate {
  std::size_t n = 0;
  std::size_t errors = 0;
  double rate = 0.0;
  double ci_low = 0.0;   // 95% Wilson interval
  double ci_high = 0.0;
};

ErrorRate wilson_interval(std::size_t errors, std::size_t n);

/// A pair decodes as bit 1 when cos(Delta Phi) < 0. bits[j] is the intended
/// bit of pair j.
ErrorRate coding_error_rate(std::span<const double> delta_phi, std::span<const int> bits);

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

/// Kolmogorov survival function Q(x) = 2 sum (-1)^{k-1} exp(-2 k^2 x^2).
double kolmogorov_sf(double x);

/// One-sample KS test of `x` against the uniform law on [lo, hi].
KsResult ks_uniform(std::span<const double> x, double lo, double hi);

struct CosineFit {
  double offset = 0.0;
  double amplitude = 0.0;
  double rms = 0.0;  // residual RMS
};

/// Least-squares fit y = offset + amplitude cos(phase).
CosineFit fit_cosine(std::span<const double> phase, std::span<const double> y);

/// Pulse-train experiment: gain-switched slave, quasi-CW master perturbed in
/// the gaps, both lasers as in `system`.
struct CodingSetup {
  SystemParams system;
  double I_s = 30e-3;
  double d = 0.1e-9;
  double period = 2.5e-9;
  double width = 1.0e-9;
  double I_low = 8e-3;
  double I_high = 50e-3;
  double t_start = 2e-9;
  std::optional<double> master_on;  // master held at 0 A before this time
  SimOptions sim;                   // t_end is derived from the train length
  double gate_fraction = 0.2;

  /// Interferometer phase over one period, tuned to the unperturbed master:
  /// (omega_s(I_s) + delta_omega) * period.
  double interferometer_bias() const;
};

struct PulseTrainRun {
  Trajectory traj;
  DriveWaveform master_drive;
  DriveWaveform slave_drive;
  std::vector<PulseRecord> pulses;
  std::vector<double> delta_phi;  // pair j = pulses (j, j+1)
};

/// Simulates amplitudes.size() + 1 pulses with master excursion amplitudes[j]
/// in gap j. The run ends one period after the last pulse starts.
PulseTrainRun run_pulse_train(const CodingSetup& setup, std::span<const double> amplitudes);

/// Noise-free injection-to-noise ratio of the setup (last period of a short
/// train with unperturbed master).
double setup_R(const CodingSetup& setup);

struct FringeRow {
  double dI = 0.0;           // [A]
  double pair_energy = 0.0;  // interfered energy of the pair
  double delta_phi = 0.0;    // unwrapped along the ramp, 0 near dI = 0
};

struct FringeScan {
  std::vector<FringeRow> rows;
  CosineFit fit;  // pair_energy against delta_phi
  PulseTrainRun run;
};

/// One pulse pair per ramp value, all in one train after a priming pulse.
FringeScan fringe_scan(const CodingSetup& setup, std::span<const double> ramp);

struct DriftRow {
  std::size_t pair = 0;
  double t_mid = 0.0;   // midpoint between the two pulse centroids [s]
  double hot = 0.0;     // Delta Phi with heating, wrapped
  double cold = 0.0;    // Delta Phi without heating, wrapped
  double drift = 0.0;   // unbounded difference hot - cold [rad]
};

struct TurnOnDrift {
  std::vector<DriftRow> rows;
  double asymptote = 0.0;  // -mu_omega * period * mean steady dT over one period
  PulseTrainRun hot;
  PulseTrainRun cold;

  /// Largest |wrap(drift - asymptote)| / |asymptote| over pairs with
  /// t_mid - t_on > t_after. The slave relocks modulo 2*pi between pulses.
  double max_relative_deviation(double t_on, double t_after) const;
};

/// Runs the train with and without master heating and compares pair phases.
/// setup.system.master_thermal must be set.
TurnOnDrift turn_on_drift(const CodingSetup& setup, std::span<const double> amplitudes);

}  // namespace injphase
